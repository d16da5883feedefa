#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dicrit {

enum class Outcome { holds, fails, inconclusive };

std::string outcome_str(Outcome o);

/// Tri-state result with structured evidence.
struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  std::string criterion;
  std::string reason;
  std::vector<std::pair<std::string, std::string>> evidence;
  std::optional<double> residual;
  std::optional<int> order;  // truncation order the result is valid to

  static Verdict make(Outcome o, std::string criterion, std::string reason) {
    Verdict v;
    v.outcome = o;
    v.criterion = std::move(criterion);
    v.reason = std::move(reason);
    return v;
  }
  Verdict& with(const std::string& key, const std::string& value) {
    evidence.emplace_back(key, value);
    return *this;
  }
  bool holds() const { return outcome == Outcome::holds; }
  bool fails() const { return outcome == Outcome::fails; }
};

inline std::string outcome_str(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::fails: return "fails";
    default: return "inconclusive";
  }
}

}  // namespace dicrit
