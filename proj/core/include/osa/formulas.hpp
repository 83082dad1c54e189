#pragma once

// Closed-form two-slot rewards for k = 2 and k = 3 sensing, written term by
// term as originally published, together with corrected readings.
//
// All inputs are beliefs sorted in non-increasing order; index 0 is the most
// likely idle channel. Each formula exists in two variants:
//   as_printed  - the expression exactly as typeset, including the unbalanced
//                 "1-(1-t(a)(1-t(b)))" trailing terms, read literally;
//   corrected   - trailing terms read as 1-(1-t(a))(1-t(b))..., the
//                 disjoint-pair bound's (1-w_j)w_j factor read as (1-w_i)w_j,
//                 and the negative-correlation counterexample's final weight
//                 read as (1-w1)(1-w2)(1-w4) for the alternative action.
// Outside those spots both variants run the same arithmetic.

#include <string>
#include <vector>

#include "osa/model.hpp"

namespace osa {

enum class FormulaVariant { as_printed, corrected };

struct ClosedFormInput {
  /// Throws ContractError if `sorted_beliefs` is not non-increasing.
  ClosedFormInput(BeliefVector sorted_beliefs, ChannelModel model);

  BeliefVector beliefs;
  ChannelModel model;

  double w(std::size_t i) const { return beliefs[i]; }
  std::size_t size() const { return beliefs.size(); }
};

/// Two-slot reward of sensing the two best channels, N >= 3. Exact for
/// p11 >= p01 in the corrected variant.
double myopic_two_slot_reward(const ClosedFormInput& in, FormulaVariant variant);

/// Two-slot reward bound for sensing channels {0, 2} first. N >= 3.
double first_and_third_bound(const ClosedFormInput& in, FormulaVariant variant);

/// Two-slot reward bound for sensing channels {0, j}, j >= 3 (so N >= 4).
double first_and_jth_bound(const ClosedFormInput& in, int j, FormulaVariant variant);

/// Two-slot reward bound for sensing {i, j} with 2 <= i < j.
double disjoint_pair_bound(const ClosedFormInput& in, int i, int j, FormulaVariant variant);

/// One published gap identity evaluated both ways. `direct` is the difference
/// of corrected closed forms; `printed_rhs` is the published right-hand side.
struct IdentityCheck {
  std::string name;
  int j = 2;
  double printed_rhs = 0.0;
  double direct = 0.0;
  double discrepancy = 0.0;
};

/// The {0,2} identity (always) and the {0,j} identity for every j >= 3.
std::vector<IdentityCheck> gap_identities(const ClosedFormInput& in);

struct CounterexampleValues {
  double r_myopic = 0.0;
  double r_alternative = 0.0;
  double gap() const { return r_alternative - r_myopic; }
};

/// Fixed instance where sensing {0,1,3} first beats the myopic {0,1,2}.
struct Counterexample {
  int id;
  BeliefVector beliefs;
  ChannelModel model;
  int sense;
  int horizon;
  SensingAction alternative;
  double published_gap;
  double tolerance;
};

/// k = 3, N = 6, p11 = 0.5 > p01 = 0.3.
const Counterexample& positive_counterexample();
/// k = 3, N = 6, p11 = 0.3 < p01 = 0.5.
const Counterexample& negative_counterexample();
/// id 1 or 2; throws ContractError otherwise.
const Counterexample& counterexample_by_id(int id);

/// Closed-form two-slot values for k = 3, N = 6 under p11 > p01.
CounterexampleValues positive_counterexample_values(const ClosedFormInput& in,
                                                    FormulaVariant variant);
/// Closed-form two-slot values for k = 3, N = 6 under p11 < p01.
CounterexampleValues negative_counterexample_values(const ClosedFormInput& in,
                                                    FormulaVariant variant);

/// Closed-form values at the embedded parameters of counterexample `id`.
CounterexampleValues counterexample_values(int id, FormulaVariant variant);

const char* to_string(FormulaVariant variant);

}  // namespace osa
