#include "treedecay/decay.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "treedecay/steiner.hpp"

namespace treedecay {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

}  // namespace

BoundConstants bound_constants(int d, int n, double beta) {
  if (d < 2) throw std::domain_error("bound_constants: d must be >= 2");
  if (n < 2) throw std::domain_error("bound_constants: n must be >= 2");
  if (!(beta > 0.0)) throw std::domain_error("bound_constants: beta must be positive");
  BoundConstants c;
  c.d = d;
  c.n = n;
  c.beta = beta;
  c.k_d = 3.0 * std::numbers::e * std::ldexp(1.0, d);
  c.A = d * std::exp(log_factorial(d));
  c.B = 2.0 * std::numbers::e * std::numbers::e * c.k_d * c.k_d;
  c.b = std::log(c.B);
  c.delta_n = beta - c.b * std::log(static_cast<double>(n));
  c.a = c.delta_n > 0.0 ? c.A / -std::expm1(-c.delta_n) : std::numeric_limits<double>::infinity();
  c.a_max = c.A * std::numbers::e / (std::numbers::e - 1.0);
  c.applicable = c.delta_n >= 1.0;
  return c;
}

double BoundConstants::log_bound(int tau) const {
  return std::log(a) + n * std::log(static_cast<double>(n)) - delta_n * tau;
}

double BoundConstants::threshold_beta() const { return 1.0 + b * std::log(static_cast<double>(n)); }

double log_entropy_factor_bound(int d, int n, int r) {
  const BoundConstants c = bound_constants(d, n, 1.0);
  return std::log(c.A) + r * (c.b + std::log(static_cast<double>(n)));
}

double TailSum::relative_gap() const { return std::fabs(std::expm1(log_direct - log_closed)); }

namespace {

TailSum geometric_tail(double log_prefactor, double rate, int tau, int terms) {
  if (!(rate > 0.0)) throw std::domain_error("tail sum diverges: rate must be positive");
  TailSum t;
  // Sum smallest terms first in log form.
  double acc = kNegInf;
  for (int j = terms - 1; j >= 0; --j) acc = log_add(acc, log_prefactor - rate * (tau + j));
  t.log_direct = acc;
  t.log_closed = log_prefactor - rate * tau - std::log(-std::expm1(-rate));
  return t;
}

}  // namespace

TailSum delta_tail(const BoundConstants& c, int tau, int terms) {
  return geometric_tail(std::log(c.A), c.delta_n, tau, terms);
}

TailSum entropy_energy_tail(const BoundConstants& c, int tau, int terms) {
  return geometric_tail(std::log(c.A), c.beta - c.b - std::log(static_cast<double>(c.n)), tau, terms);
}

double DecayRecord::abs_T() const { return std::exp(log_abs_T); }
double DecayRecord::bound() const { return std::exp(log_bound); }

std::vector<DecayRecord> verify_decay(const Box& box, double beta, int n, const std::vector<SiteTuple>& tuples) {
  const BoundConstants c = bound_constants(box.dim(), n, beta);
  const InverseTemperature b(beta);
  std::vector<DecayRecord> out;
  for (const SiteTuple& t : tuples) {
    if (static_cast<int>(t.size()) != n) throw std::domain_error("verify_decay: tuple length must equal n");
    DecayRecord r;
    r.n = n;
    r.beta = beta;
    r.sites = t;
    r.tau = tau(SteinerInstance{box, t});
    r.log_abs_T = log_truncated(box, b, t).log_abs;
    r.delta_n = c.delta_n;
    r.applicable = c.applicable;
    r.log_bound = c.delta_n > 0.0 ? c.log_bound(r.tau) : std::numeric_limits<double>::infinity();
    r.satisfied = !r.applicable || r.log_abs_T <= r.log_bound;
    out.push_back(r);
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<DecayRecord>& records) {
  os << "n,beta,sites,tau,abs_T,bound,delta_n,satisfied\n";
  os << std::setprecision(17);
  for (const auto& r : records) {
    os << r.n << ',' << r.beta << ",\"" << to_string(r.sites) << "\"," << r.tau << ',' << r.abs_T() << ',';
    if (r.applicable) {
      os << r.bound();
    } else {
      os << "NA";
    }
    os << ',' << r.delta_n << ',' << (r.applicable ? (r.satisfied ? "true" : "false") : "NA") << '\n';
  }
}

std::string to_json(const std::vector<DecayRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["n"] = r.n;
    j["beta"] = r.beta;
    j["sites"] = to_string(r.sites);
    j["tau"] = r.tau;
    j["abs_T"] = r.abs_T();
    j["log_abs_T"] = std::isfinite(r.log_abs_T) ? nlohmann::json(r.log_abs_T) : nlohmann::json(nullptr);
    j["bound"] = r.applicable ? nlohmann::json(r.bound()) : nlohmann::json(nullptr);
    j["delta_n"] = r.delta_n;
    j["satisfied"] = r.applicable ? nlohmann::json(r.satisfied) : nlohmann::json(nullptr);
    arr.push_back(j);
  }
  return arr.dump(2);
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  ExperimentConfig c;
  try {
    if (j.contains("dim")) c.dim = j.at("dim").get<int>();
    if (j.contains("interior")) c.interior = j.at("interior").get<std::string>();
    if (j.contains("beta_grid")) {
      const auto& g = j.at("beta_grid");
      if (g.is_number()) {
        c.beta_grid.push_back(g.get<double>());
      } else {
        c.beta_grid = g.get<std::vector<double>>();
      }
    }
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("tuples")) {
      for (const auto& t : j.at("tuples")) {
        if (t.is_string()) {
          c.tuples.push_back(t.get<std::string>());
          continue;
        }
        // [[x, y], [x, y], ...]
        SiteTuple sites;
        for (const auto& s : t) sites.emplace_back(s.get<std::vector<int>>());
        c.tuples.push_back(to_string(sites));
      }
    }
    if (j.contains("caps")) {
      const auto& caps = j.at("caps");
      c.cap = caps.is_object() ? caps.at("enumeration").get<std::uint64_t>() : caps.get<std::uint64_t>();
    }
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace treedecay
