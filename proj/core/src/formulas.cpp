#include "osa/formulas.hpp"

#include <cmath>
#include <string>

namespace osa {

namespace {

// 1 - (1 - a)(1 - b) read properly, or 1 - (1 - a(1 - b)) as typeset.
double trailing_pair(double a, double b, FormulaVariant v) {
  if (v == FormulaVariant::corrected) return 1.0 - (1.0 - a) * (1.0 - b);
  return 1.0 - (1.0 - a * (1.0 - b));
}

double trailing_triple(double a, double b, double c, FormulaVariant v) {
  if (v == FormulaVariant::corrected) return 1.0 - (1.0 - a) * (1.0 - b) * (1.0 - c);
  return 1.0 - (1.0 - a * (1.0 - b) * (1.0 - c));
}

void require_size(const ClosedFormInput& in, std::size_t n, const char* what) {
  if (in.size() < n) {
    throw ContractError(std::string(what) + " needs at least " + std::to_string(n) + " channels");
  }
}

// Shared shape of the k = 2 bounds: sense {a, b}; after one idle the best
// other channel has belief `single`; after two busy the best pair is
// (`busy_first`, `busy_second`).
double two_slot_pair(double wa, double wb, double wa_weight_d, double p11, double single,
                     double busy_first, double busy_second, FormulaVariant v) {
  const double a = 1.0 - (1.0 - wa) * (1.0 - wb);
  const double b = wa * wb * (1.0 - (1.0 - p11) * (1.0 - p11));
  const double c = wa * (1.0 - wb) * (1.0 - (1.0 - p11) * (1.0 - single));
  const double d = wa_weight_d * wb * (1.0 - (1.0 - p11) * (1.0 - single));
  const double e = (1.0 - wa) * (1.0 - wb) * trailing_pair(busy_first, busy_second, v);
  return a + b + c + d + e;
}

}  // namespace

ClosedFormInput::ClosedFormInput(BeliefVector sorted_beliefs, ChannelModel m)
    : beliefs(std::move(sorted_beliefs)), model(m) {
  for (std::size_t i = 1; i < beliefs.size(); ++i) {
    if (beliefs[i] > beliefs[i - 1]) throw ContractError("closed forms need non-increasing beliefs");
  }
}

double myopic_two_slot_reward(const ClosedFormInput& in, FormulaVariant v) {
  require_size(in, 3, "myopic two-slot closed form");
  const auto& m = in.model;
  const double t3 = tau(in.w(2), m);
  const double f = in.size() == 3 ? m.p01() : tau(in.w(3), m);
  return two_slot_pair(in.w(0), in.w(1), 1.0 - in.w(0), m.p11(), t3, t3, f, v);
}

double first_and_third_bound(const ClosedFormInput& in, FormulaVariant v) {
  require_size(in, 3, "first-and-third bound");
  const auto& m = in.model;
  const double t2 = tau(in.w(1), m);
  return two_slot_pair(in.w(0), in.w(2), 1.0 - in.w(0), m.p11(), t2, t2, m.p01(), v);
}

double first_and_jth_bound(const ClosedFormInput& in, int j, FormulaVariant v) {
  if (j < 3 || static_cast<std::size_t>(j) >= in.size()) {
    throw ContractError("first-and-jth bound needs 3 <= j < N");
  }
  const auto& m = in.model;
  const double t2 = tau(in.w(1), m);
  const double t3 = tau(in.w(2), m);
  return two_slot_pair(in.w(0), in.w(static_cast<std::size_t>(j)), 1.0 - in.w(0), m.p11(), t2, t2,
                       t3, v);
}

double disjoint_pair_bound(const ClosedFormInput& in, int i, int j, FormulaVariant v) {
  if (i < 2 || j <= i || static_cast<std::size_t>(j) >= in.size()) {
    throw ContractError("disjoint-pair bound needs 2 <= i < j < N");
  }
  const auto& m = in.model;
  const double wi = in.w(static_cast<std::size_t>(i));
  const double wj = in.w(static_cast<std::size_t>(j));
  const double t1 = tau(in.w(0), m);
  const double t2 = tau(in.w(1), m);
  // Typeset as (1 - w_j) w_j in the single-idle term for channel j.
  const double d_weight = v == FormulaVariant::corrected ? 1.0 - wi : 1.0 - wj;
  return two_slot_pair(wi, wj, d_weight, m.p11(), t1, t1, t2, v);
}

std::vector<IdentityCheck> gap_identities(const ClosedFormInput& in) {
  require_size(in, 3, "gap identities");
  const auto& m = in.model;
  const double p11 = m.p11();
  const double p01 = m.p01();
  const double w1 = in.w(0), w2 = in.w(1), w3 = in.w(2);
  const double r_star = myopic_two_slot_reward(in, FormulaVariant::corrected);

  std::vector<IdentityCheck> out;
  {
    const double f = in.size() == 3 ? p01 : tau(in.w(3), m);
    IdentityCheck c;
    c.name = "myopic_minus_first_and_third";
    c.j = 2;
    c.printed_rhs = (1.0 - w1) * (w2 - w3) * (1.0 - (1.0 - p11) * (f - p01));
    c.direct = r_star - first_and_third_bound(in, FormulaVariant::corrected);
    c.discrepancy = std::abs(c.printed_rhs - c.direct);
    out.push_back(c);
  }
  const double t2 = tau(w2, m);
  const double t3 = tau(w3, m);
  for (std::size_t j = 3; j < in.size(); ++j) {
    const double wj = in.w(j);
    const double tj = tau(wj, m);
    IdentityCheck c;
    c.name = "myopic_minus_first_and_jth";
    c.j = static_cast<int>(j);
    c.printed_rhs = w1 * (1.0 - w2) * (w3 - wj) * (p11 - p01) +
                    (1.0 - w1) * (t2 - tj) * (w2 * (1.0 - p11) + (1.0 - t3) * (1.0 - w2)) +
                    (1.0 - w1) * (t2 - tj) * (1.0 - (1.0 - p11) * (t3 - p01));
    c.direct = r_star - first_and_jth_bound(in, static_cast<int>(j), FormulaVariant::corrected);
    c.discrepancy = std::abs(c.printed_rhs - c.direct);
    out.push_back(c);
  }
  return out;
}

namespace {

struct ThreeSensed {
  double a, b, c;
  double all() const { return a * b * c; }
  double exactly_two() const {
    return a * b * (1.0 - c) + a * (1.0 - b) * c + (1.0 - a) * b * c;
  }
  double exactly_one() const {
    return a * (1.0 - b) * (1.0 - c) + (1.0 - a) * b * (1.0 - c) + (1.0 - a) * (1.0 - b) * c;
  }
  double none() const { return (1.0 - a) * (1.0 - b) * (1.0 - c); }
  double immediate() const { return 1.0 - none(); }
};

void require_six(const ClosedFormInput& in) {
  if (in.size() != 6) throw ContractError("k = 3 counterexample closed forms need exactly 6 channels");
}

// `spare` is the one top-four channel left unsensed.
double positive_value(const ClosedFormInput& in, const ThreeSensed& s, double spare,
                      FormulaVariant v) {
  const auto& m = in.model;
  const double q = 1.0 - m.p11();
  const double td = tau(spare, m);
  const double t5 = tau(in.w(4), m);
  const double t6 = tau(in.w(5), m);
  return s.immediate() + s.all() * (1.0 - q * q * q) + s.exactly_two() * (1.0 - q * q * (1.0 - td)) +
         s.exactly_one() * (1.0 - q * (1.0 - td) * (1.0 - t5)) +
         s.none() * trailing_triple(td, t5, t6, v);
}

double negative_value(const ClosedFormInput& in, const ThreeSensed& s, double spare,
                      double last_weight, FormulaVariant) {
  const auto& m = in.model;
  const double q = 1.0 - m.p01();
  const double td = tau(spare, m);
  const double t5 = tau(in.w(4), m);
  const double t6 = tau(in.w(5), m);
  const double none = (1.0 - s.a) * (1.0 - s.b) * (1.0 - last_weight);
  return s.immediate() + s.all() * (1.0 - (1.0 - t6) * (1.0 - t5) * (1.0 - td)) +
         s.exactly_two() * (1.0 - q * (1.0 - t6) * (1.0 - t5)) +
         s.exactly_one() * (1.0 - q * q * (1.0 - t6)) + none * (1.0 - q * q * q);
}

}  // namespace

CounterexampleValues positive_counterexample_values(const ClosedFormInput& in, FormulaVariant v) {
  require_six(in);
  const double w1 = in.w(0), w2 = in.w(1), w3 = in.w(2), w4 = in.w(3);
  return {positive_value(in, {w1, w2, w3}, w4, v), positive_value(in, {w1, w2, w4}, w3, v)};
}

CounterexampleValues negative_counterexample_values(const ClosedFormInput& in, FormulaVariant v) {
  require_six(in);
  const double w1 = in.w(0), w2 = in.w(1), w3 = in.w(2), w4 = in.w(3);
  // Typeset with (1 - w3) in the alternative's all-busy weight.
  const double alt_last = v == FormulaVariant::corrected ? w4 : w3;
  return {negative_value(in, {w1, w2, w3}, w4, w3, v),
          negative_value(in, {w1, w2, w4}, w3, alt_last, v)};
}

const Counterexample& positive_counterexample() {
  static const Counterexample ce{1,
                                 BeliefVector{0.99, 0.5, 0.4, 0.39, 0.25, 0.25},
                                 ChannelModel(0.3, 0.5),
                                 3,
                                 2,
                                 SensingAction{0, 1, 3},
                                 0.00005625,
                                 1e-9};
  return ce;
}

const Counterexample& negative_counterexample() {
  static const Counterexample ce{2,
                                 BeliefVector{0.99, 0.5, 0.4, 0.39, 0.25, 0.25},
                                 ChannelModel(0.5, 0.3),
                                 3,
                                 2,
                                 SensingAction{0, 1, 3},
                                 0.00002,
                                 5e-6};
  return ce;
}

const Counterexample& counterexample_by_id(int id) {
  if (id == 1) return positive_counterexample();
  if (id == 2) return negative_counterexample();
  throw ContractError("counterexample id must be 1 or 2");
}

CounterexampleValues counterexample_values(int id, FormulaVariant variant) {
  const Counterexample& ce = counterexample_by_id(id);
  const ClosedFormInput in(ce.beliefs, ce.model);
  return id == 1 ? positive_counterexample_values(in, variant)
                 : negative_counterexample_values(in, variant);
}

const char* to_string(FormulaVariant variant) {
  return variant == FormulaVariant::corrected ? "corrected" : "as-printed";
}

}  // namespace osa
