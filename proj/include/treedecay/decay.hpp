#ifndef TREEDECAY_DECAY_HPP_
#define TREEDECAY_DECAY_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "treedecay/correlations.hpp"
#include "treedecay/spin_system.hpp"

namespace treedecay {

/// Constants of the tree-decay bound |T| <= a n^n exp(-delta_n tau).
struct BoundConstants {
  int d = 2;
  int n = 2;
  double beta = 0.0;
  double k_d = 0.0;      ///< 3e 2^d
  double A = 0.0;        ///< d d!
  double B = 0.0;        ///< 2 e^2 k_d^2
  double b = 0.0;        ///< ln B
  double delta_n = 0.0;  ///< beta - b ln n
  double a = 0.0;        ///< A / (1 - exp(-delta_n)); infinite when delta_n <= 0
  double a_max = 0.0;    ///< A e / (e - 1)
  bool applicable = false;  ///< delta_n >= 1

  /// log of a n^n exp(-delta_n tau).
  double log_bound(int tau) const;
  /// Smallest beta with delta_n >= 1.
  double threshold_beta() const;
};

/// Throws std::domain_error for d < 2, n < 2 or beta <= 0.
BoundConstants bound_constants(int d, int n, double beta);

/// log(A B^r n^r), the entropy factor bound.
double log_entropy_factor_bound(int d, int n, int r);

/// Tail sums in log form: direct summation from tau to tau + terms - 1 and the
/// closed form of the full series.
struct TailSum {
  double log_direct = 0.0;
  double log_closed = 0.0;
  double relative_gap() const;
};

/// sum_{r >= tau} A exp(-delta r) = A exp(-delta tau) / (1 - exp(-delta)).
TailSum delta_tail(const BoundConstants& c, int tau, int terms = 20000);
/// sum_{r >= tau} A B^r n^r exp(-beta r), which converges only for
/// beta > b + ln n, with rate beta - b - ln n. Throws std::domain_error otherwise.
TailSum entropy_energy_tail(const BoundConstants& c, int tau, int terms = 20000);

struct DecayRecord {
  int n = 0;
  double beta = 0.0;
  SiteTuple sites;
  int tau = 0;
  double log_abs_T = 0.0;  ///< -inf when T = 0
  double log_bound = 0.0;
  double delta_n = 0.0;
  bool applicable = false;
  bool satisfied = true;  ///< meaningful only when applicable

  double abs_T() const;
  double bound() const;
};

/// Exact |T|, tau and the bound for every tuple. The tuple length is n.
/// Throws std::domain_error when a tuple has the wrong length.
std::vector<DecayRecord> verify_decay(const Box& box, double beta, int n, const std::vector<SiteTuple>& tuples);

void write_csv(std::ostream& os, const std::vector<DecayRecord>& records);
std::string to_json(const std::vector<DecayRecord>& records);

/// Experiment manifest: {dim, interior, beta_grid, n, tuples, caps, output}.
struct ExperimentConfig {
  std::optional<int> dim;
  std::optional<std::string> interior;
  std::vector<double> beta_grid;
  std::optional<int> n;
  std::vector<std::string> tuples;
  std::optional<std::uint64_t> cap;
  std::optional<std::string> output;
};

/// Throws std::invalid_argument on malformed JSON or wrong value types.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace treedecay

#endif  // TREEDECAY_DECAY_HPP_
