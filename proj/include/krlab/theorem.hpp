#pragma once

// Complexity queries against W, the exact chain-rule check for W, and the survey of
// the chain-rule defect for U.

#include "krlab/chaitin.hpp"
#include "krlab/complexity_table.hpp"
#include "krlab/simple_set.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace krlab {

class BudgetTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// K_W(alpha | <s, d>): shortest W_s codeword for alpha on d, or K_U(alpha | d) when s = Λ.
inline Complexity k_W(const WComputer& w, const BitString& alpha, const BitString& s, const BitString& d) {
  if (s.empty()) return w.base ? k(*w.base, alpha, d) : std::nullopt;
  auto it = w.family.find(s);
  if (it == w.family.end()) return std::nullopt;
  return it->second.shortest(alpha, d);
}

struct TheoremRow {
  BitString alpha;
  BitString gamma;
  BitString d;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  long long residual = 0;

  bool operator==(const TheoremRow&) const = default;
};

struct TheoremReport {
  TableParams params;
  std::size_t kappa = 0;
  std::vector<TheoremRow> triples;
  bool all_exact = true;
};

/// For all alpha, d in S and gamma in S \ {Λ}:
///   lhs = K_W(alpha | <gamma, d>), rhs = K_U(<alpha, gamma> | d) - K_U(gamma | d) + kappa.
/// Throws BudgetTooSmall if any term is Infinite.
inline TheoremReport verify_theorem(const WComputer& w, const ComplexityTable& ktable, const SimpleSet& simple,
                                    std::size_t kappa) {
  TheoremReport report{ktable.params(), kappa, {}, true};
  for (const auto& alpha : simple.members) {
    for (const auto& gamma : simple.members) {
      if (gamma.empty()) continue;
      for (const auto& d : simple.members) {
        const Complexity lhs = k_W(w, alpha, gamma, d);
        const Complexity joint = k_joint(ktable, alpha, gamma, d);
        const Complexity inner = k(ktable, gamma, d);
        if (!lhs || !joint || !inner) {
          throw BudgetTooSmall("infinite term at alpha=" + alpha.to_string() + " gamma=" + gamma.to_string() +
                               " d=" + d.to_string());
        }
        const long long rhs = static_cast<long long>(*joint) - static_cast<long long>(*inner) +
                              static_cast<long long>(kappa);
        TheoremRow row{alpha, gamma, d, *lhs, static_cast<std::size_t>(rhs), static_cast<long long>(*lhs) - rhs};
        report.all_exact = report.all_exact && row.residual == 0;
        report.triples.push_back(std::move(row));
      }
    }
  }
  return report;
}

struct DefectSurvey {
  TableParams params;
  std::map<long long, std::size_t> histogram;
  std::optional<ChainDefect> min;
  std::optional<ChainDefect> max;
  std::size_t finite_triples = 0;
  std::size_t infinite_triples = 0;
};

/// Chain-rule defect over every (alpha, gamma, beta) in S^3 with finite terms. Extremes keep
/// the first triple reaching them in canonical order.
inline DefectSurvey defect_survey(const ComplexityTable& ktable, const SimpleSet& simple) {
  DefectSurvey survey{ktable.params(), {}, std::nullopt, std::nullopt, 0, 0};
  for (const auto& a : simple.members) {
    for (const auto& g : simple.members) {
      for (const auto& b : simple.members) {
        const auto defect = chain_defect(ktable, a, g, b);
        if (!defect) {
          ++survey.infinite_triples;
          continue;
        }
        ++survey.finite_triples;
        ++survey.histogram[defect->delta_value];
        if (!survey.min || defect->delta_value < survey.min->delta_value) survey.min = defect;
        if (!survey.max || defect->delta_value > survey.max->delta_value) survey.max = defect;
      }
    }
  }
  return survey;
}

}  // namespace krlab
