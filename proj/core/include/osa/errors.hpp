#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace osa {

/// A probability or belief argument fell outside [0,1].
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller violated an operation precondition (bad action, mismatched
/// observation, tree depth, index constraint, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The two-state chain with p01 = 0 and p11 = 1 has no unique stationary law.
class SingularChainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exhaustive optimisation would expand more nodes than allowed.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::uint64_t required, std::uint64_t budget)
      : std::runtime_error("node budget exceeded: requires " + std::to_string(required) +
                           " nodes, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

}  // namespace osa
