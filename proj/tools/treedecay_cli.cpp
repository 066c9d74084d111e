#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "treedecay/continents.hpp"
#include "treedecay/decay.hpp"
#include "treedecay/errors.hpp"
#include "treedecay/replica.hpp"
#include "treedecay/steiner.hpp"
#include "treedecay/surfaces.hpp"

using namespace treedecay;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand. Unset flags fall back to the config file.
struct Options {
  std::string config;
  std::string output;
  std::optional<int> n;
  std::optional<int> dim;
  std::string interior;
  std::vector<double> beta;
  std::vector<std::string> sites;
  int gamma = 1;
  int max_r = 0;
  int side = 1;
  bool edges = false;
  bool energy_factor = false;
};

struct Settings {
  int n = 2;
  Box box{{2, 2}};
  std::vector<double> betas;
  std::vector<SiteTuple> tuples;
  std::string output;
};

Settings resolve(const Options& o, int default_n, const std::string& default_interior, std::vector<double> default_betas) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  if (cfg.cap && std::getenv("REPLICA_CAP") == nullptr) {
    setenv("REPLICA_CAP", std::to_string(*cfg.cap).c_str(), 1);
  }
  Settings s;
  s.n = o.n.value_or(cfg.n.value_or(default_n));
  const std::optional<int> dim = o.dim ? o.dim : cfg.dim;
  std::string interior = !o.interior.empty() ? o.interior : cfg.interior.value_or("");
  if (interior.empty()) {
    interior = default_interior;
    if (dim && *dim == 3) interior += "x" + default_interior.substr(0, default_interior.find('x'));
  }
  s.box = Box::parse(interior);
  if (dim && *dim != s.box.dim()) throw UsageError("--dim does not match --interior " + interior);
  s.betas = !o.beta.empty() ? o.beta : cfg.beta_grid;
  if (s.betas.empty()) s.betas = std::move(default_betas);
  const std::vector<std::string>& tuple_text = !o.sites.empty() ? o.sites : cfg.tuples;
  for (const auto& t : tuple_text) s.tuples.push_back(parse_site_list(t));
  s.output = !o.output.empty() ? o.output : cfg.output.value_or("");
  return s;
}

SiteTuple first_sites(const Box& box, int count) {
  const auto sites = box.interior_sites();
  if (count > static_cast<int>(sites.size())) throw UsageError("interior has fewer than " + std::to_string(count) + " sites");
  return SiteTuple(sites.begin(), sites.begin() + count);
}

std::string extent_text(const Box& box) {
  std::string out;
  for (int e : box.extent()) out += (out.empty() ? "" : "x") + std::to_string(e);
  return out;
}

bool wants_json(const std::string& path) { return path.size() >= 5 && path.substr(path.size() - 5) == ".json"; }

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

nlohmann::json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

int run_identity(const Options& o) {
  const Settings s = resolve(o, 2, "2x2", {0.5});
  std::vector<SiteTuple> tuples = s.tuples;
  if (tuples.empty()) tuples.push_back(first_sites(s.box, s.n));
  bool ok = true;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : tuples) {
    for (double beta : s.betas) {
      const IdentityReport r = verify_representation(s.box, InverseTemperature(beta), s.n, t, o.gamma);
      ok = ok && r.abs_diff < 1e-9 && r.exact.value_or(true);
      out.push_back(nlohmann::json::parse(to_json(r)));
    }
  }
  emit(s.output, (out.size() == 1 ? out[0] : out).dump(2));
  return ok ? kPass : kFail;
}

int run_condense(const Options& o) {
  const Settings s = resolve(o, 2, "3x3", {0.5, 1.0});
  std::vector<SiteTuple> tuples = s.tuples;
  if (tuples.empty()) {
    const auto sites = s.box.interior_sites();
    tuples.push_back({sites.front(), sites.back()});
  }
  bool ok = true;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : tuples) {
    for (const CondensationReport& r : condensation_check(s.box, s.betas, s.n, t)) {
      const bool pass = r.relative() < 1e-9 && r.exact_zero.value_or(true);
      ok = ok && pass;
      nlohmann::json j{{"n", r.n},
                       {"beta", r.beta},
                       {"sites", to_string(r.sites)},
                       {"total", complex_json(r.total)},
                       {"single_continent", complex_json(r.single_continent)},
                       {"scattered", complex_json(r.scattered)},
                       {"relative", r.relative()},
                       {"satisfied", pass}};
      if (r.exact_zero) j["exact_zero"] = *r.exact_zero;
      out.push_back(j);
    }
  }
  emit(s.output, out.dump(2));
  return ok ? kPass : kFail;
}

int run_census(const Options& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  const int d = o.dim.value_or(cfg.dim.value_or(2));
  if (d != 2 && d != 3) throw UsageError("--dim must be 2 or 3");
  const int max_r = o.max_r > 0 ? o.max_r : census_limit(d);
  const auto counts = count_surfaces_upto(d, max_r);
  std::ostringstream os;
  os << "d,r,N(r),bound,ratio\n" << std::setprecision(10);
  bool ok = true;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int r = static_cast<int>(i) + 1;
    const long double bound = entropy_bound(d, r);
    const long double ratio = static_cast<long double>(counts[i]) / bound;
    ok = ok && ratio <= 1.0L;
    os << d << ',' << r << ',' << counts[i] << ',' << static_cast<double>(bound) << ',' << static_cast<double>(ratio) << '\n';
  }
  emit(!o.output.empty() ? o.output : cfg.output.value_or(""), os.str());
  return ok ? kPass : kFail;
}

int run_steiner(const Options& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  const std::vector<std::string>& text = !o.sites.empty() ? o.sites : cfg.tuples;
  if (text.empty()) throw UsageError("steiner needs --sites");
  const std::string interior = !o.interior.empty() ? o.interior : cfg.interior.value_or("");
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : text) {
    const SiteTuple terminals = parse_site_list(t);
    SteinerInstance inst{Box({0, 0}), terminals};
    Site offset(std::vector<int>(terminals.empty() ? 0 : static_cast<std::size_t>(terminals[0].dim()), 0));
    if (interior.empty()) {
      auto [box, shifted] = normalized_instance(terminals);
      for (int k = 0; k < offset.dim(); ++k) offset.coords[static_cast<std::size_t>(k)] = terminals[0][k] - shifted[0][k];
      inst = {box, shifted};
    } else {
      inst.box = Box::parse(interior);
    }
    const SteinerTree tree = steiner_tree(inst);
    auto unshift = [&](Site s) {
      for (int k = 0; k < s.dim(); ++k) s.coords[static_cast<std::size_t>(k)] += offset[k];
      return s;
    };
    nlohmann::json j{{"sites", to_string(terminals)}, {"interior", extent_text(inst.box)}, {"tau", tree.length}};
    if (o.edges) {
      nlohmann::json e = nlohmann::json::array();
      for (const auto& [a, b] : tree.edges) e.push_back({to_string(unshift(a)), to_string(unshift(b))});
      j["edges"] = e;
    }
    out.push_back(j);
  }
  emit(!o.output.empty() ? o.output : cfg.output.value_or(""), (out.size() == 1 ? out[0] : out).dump(2));
  return kPass;
}

int run_energy_factor(const Settings& s) {
  const ContourTable table = contour_table(s.box, s.n);
  const LatticeIndex lat(table.box);
  bool ok = true;
  nlohmann::json out = nlohmann::json::array();
  for (double beta : s.betas) {
    for (const ContourClass& cls : table.classes) {
      const ContourProbability p = contour_probability(table, InverseTemperature(beta), cls);
      ok = ok && p.satisfied;
      nlohmann::json j = nlohmann::json::parse(to_json(p));
      j["beta"] = beta;
      const SiteSet k = lat.to_site_set(cls.continent);
      j["continent"] = to_string(SiteTuple(k.begin(), k.end()));
      out.push_back(j);
    }
  }
  emit(s.output, out.dump(2));
  return ok ? kPass : kFail;
}

int run_decay(const Options& o) {
  const Settings s = resolve(o, 2, "5x5", {12.0});
  if (o.energy_factor) return run_energy_factor(s);
  if (s.tuples.empty()) throw UsageError("decay needs --sites or config tuples");
  std::vector<DecayRecord> records;
  for (double beta : s.betas) {
    auto part = verify_decay(s.box, beta, s.n, s.tuples);
    records.insert(records.end(), part.begin(), part.end());
  }
  bool ok = true;
  for (const auto& r : records) ok = ok && r.satisfied;
  if (wants_json(s.output)) {
    emit(s.output, to_json(records));
  } else {
    std::ostringstream os;
    write_csv(os, records);
    emit(s.output, os.str());
  }
  return ok ? kPass : kFail;
}

int run_counterexample(const Options& o) {
  const CounterexampleReport r = local_symmetry_counterexample(o.side);
  const nlohmann::json j{{"side", r.side},
                         {"interior", extent_text(r.box)},
                         {"region", to_string(SiteTuple(r.region.begin(), r.region.end()))},
                         {"boundary_size", r.boundary_size},
                         {"energy_before", r.energy_before},
                         {"energy_after", r.energy_after},
                         {"drop", r.drop()},
                         {"expected_drop", r.expected_drop()},
                         {"energy_twice", r.energy_twice}};
  emit(o.output, j.dump(2));
  return r.drop() == r.expected_drop() && r.energy_twice == r.energy_before ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-decay verification for truncated Ising correlations via replicas"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON file with keys dim, interior, beta_grid, n, tuples, caps, output");
    sub->add_option("--output", o.output, "Output path (stdout when omitted)");
  };
  auto model = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "Number of sites / replicas")->check(CLI::Range(1, 16));
    sub->add_option("--dim", o.dim, "Lattice dimension")->check(CLI::Range(2, 3));
    sub->add_option("--interior", o.interior, "Interior extents, e.g. 2x2");
    sub->add_option("--beta", o.beta, "Inverse temperature(s)")->check(CLI::NonNegativeNumber);
    sub->add_option("--sites", o.sites, "Site tuple, e.g. \"(1,1);(4,4)\"; repeat for several");
  };

  CLI::App* identity = app.add_subcommand("verify-identity", "Truncated correlation against the replica s-moment");
  common(identity);
  model(identity);
  identity->add_option("--gamma", o.gamma, "Replica index coprime to n")->check(CLI::PositiveNumber);

  CLI::App* condense = app.add_subcommand("condense", "Split s-moments by continent and check the scattered part vanishes");
  common(condense);
  model(condense);

  CLI::App* census = app.add_subcommand("census", "Count connected surfaces through a fixed face");
  common(census);
  census->add_option("--dim", o.dim, "Lattice dimension")->check(CLI::Range(2, 3));
  census->add_option("--max-r", o.max_r, "Largest surface size")->check(CLI::PositiveNumber);

  CLI::App* steiner = app.add_subcommand("steiner", "Minimal lattice tree length through a site tuple");
  common(steiner);
  steiner->add_option("--sites", o.sites, "Terminals, e.g. \"(0,0);(3,4)\"; repeat for several");
  steiner->add_option("--interior", o.interior, "Box interior (default: bounding box of the terminals)");
  steiner->add_flag("--edges", o.edges, "Include the edges of one optimal tree");

  CLI::App* decay = app.add_subcommand("decay", "Check |T| <= a n^n exp(-delta_n tau)");
  common(decay);
  model(decay);
  decay->add_flag("--energy-factor", o.energy_factor, "Report Pr(K, C) against exp(-beta r) instead");

  CLI::App* counter = app.add_subcommand("counterexample", "Energy drop under a local flip off a continent");
  common(counter);
  counter->add_option("--side", o.side, "Side of the flipped square")->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*identity) return run_identity(o);
    if (*condense) return run_condense(o);
    if (*census) return run_census(o);
    if (*steiner) return run_steiner(o);
    if (*decay) return run_decay(o);
    if (*counter) return run_counterexample(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << " (shrink the instance or raise REPLICA_CAP where it applies)\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
