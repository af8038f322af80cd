#include "dispatch.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "mollified/arithmetic.hpp"
#include "mollified/asymptotics.hpp"
#include "mollified/cache.hpp"
#include "mollified/characters.hpp"
#include "mollified/moments.hpp"
#include "mollified/optimizer.hpp"
#include "mollified/parallel.hpp"
#include "suites.hpp"

namespace mollified::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Options shared by every subcommand (accepted before or after its name).
struct Common {
  unsigned jobs = 0;
  std::string cache_dir;
};

// How the mollifier profile is chosen: an explicit polynomial, or the
// truncated optimum for some k.
struct SpecOptions {
  double theta = 0.49;
  std::string poly;
  unsigned degree = 9;
  unsigned optimal_for_k = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--theta", theta, "Mollifier length exponent, y = q^theta")->capture_default_str();
    auto* p = cmd->add_option("--poly", poly, "Profile as JSON {\"coefficients\": [...], \"theta\": t}, or @file");
    auto* d = cmd->add_option("--optimal-degree,--degree", degree, "Odd degree of the truncated optimal profile")
                  ->capture_default_str();
    cmd->add_option("--optimal-for-k", optimal_for_k, "Optimize the profile for this k (default: --k)");
    p->excludes(d);
  }

  mollifier::MollifierSpec build(unsigned k) const {
    mollifier::MollifierSpec spec;
    if (!poly.empty()) {
      std::string text = poly;
      if (text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw std::invalid_argument("cannot read " + text.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      }
      spec = mollifier::MollifierSpec::from_json(text, theta);
    } else {
      spec = mollifier::optimal_P_truncated(optimal_for_k ? optimal_for_k : k, theta, degree);
    }
    spec.validate(0.5);
    return spec;
  }

  json to_json() const {
    json j;
    j["theta"] = theta;
    if (!poly.empty()) {
      j["poly"] = poly;
    } else {
      j["optimal_degree"] = degree;
      if (optimal_for_k) j["optimal_for_k"] = optimal_for_k;
    }
    return j;
  }
};

RunManifest manifest(const std::string& command, json parameters, const Common& common, Clock::time_point start) {
  RunManifest m;
  m.command = command;
  m.parameters = std::move(parameters);
  m.version = tool_version();
  m.wall_seconds = seconds_since(start);
  m.jobs = resolve_jobs(common.jobs);
  return m;
}

std::filesystem::path cache_directory(const Common& common) {
  return cache::LValueCache::resolve_directory(common.cache_dir.empty() ? std::nullopt
                                                                        : std::optional<std::string>(common.cache_dir));
}

std::unique_ptr<cache::LValueCache> open_cache(const Common& common, bool disabled) {
  if (disabled) return nullptr;
  return std::make_unique<cache::LValueCache>(cache_directory(common));
}

// ---------------------------------------------------------------------------

int run_table1(double theta, const std::string& format, std::ostream& out) {
  const auto rows = optimizer::table1(theta);
  bool all = true;
  for (const auto& r : rows) all = all && r.matches;
  if (format == "json") {
    json j = json::array();
    for (const auto& r : rows) {
      json row;
      row["k"] = r.k;
      row["reference_P_k"] = r.reference_P_k;
      row["reference_P_star"] = r.reference_P_star;
      row["computed_P_star"] = r.computed_P_star;
      row["computed_truncated"] = r.computed_truncated;
      row["matches"] = r.matches;
      j.push_back(row);
    }
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    out << "k,reference_P_k,reference_P_star,computed_P_star,computed_truncated,matches\n";
    for (const auto& r : rows)
      out << r.k << "," << sci(r.reference_P_k) << "," << sci(r.reference_P_star) << "," << sci(r.computed_P_star)
          << "," << sci(r.computed_truncated) << "," << (r.matches ? "true" : "false") << "\n";
  } else {
    out << "   k   P_k (ref)   P_k* (ref)   P_k* (computed)   truncated   match\n";
    for (const auto& r : rows) {
      char line[160];
      std::snprintf(line, sizeof line, "%4u   %.4f      %.4f       %.12f    %.4f      %s\n", r.k, r.reference_P_k,
                    r.reference_P_star, r.computed_P_star, r.computed_truncated, r.matches ? "yes" : "NO");
      out << line;
    }
  }
  return all ? kExitOk : kExitCheckFailed;
}

int run_characters(std::uint64_t q, const Common& common, Clock::time_point start, std::ostream& out) {
  const auto group = characters::build_group(q);
  const auto family = characters::enumerate_even_primitive(group);
  json j;
  j["modulus"] = q;
  j["phi"] = group->order();
  j["phi_star"] = arithmetic::phi_star(q);
  j["even_primitive_count"] = family.size();
  json list = json::array();
  for (const auto& chi : family) {
    json c;
    c["exponents"] = chi.exponents();
    c["conductor"] = chi.conductor();
    c["parity"] = chi.parity();
    list.push_back(c);
  }
  j["characters"] = list;
  json params;
  params["q"] = q;
  j["manifest"] = manifest("characters", params, common, start).to_json();
  out << j.dump(2) << "\n";
  return kExitOk;
}

int run_optimize(unsigned k, double theta, unsigned degree, const Common& common, Clock::time_point start,
                 std::ostream& out) {
  const auto result = optimizer::optimize(k, theta, degree);
  json j = json::parse(result.to_json());
  json params;
  params["k"] = k;
  params["theta"] = theta;
  params["degree"] = degree;
  j["manifest"] = manifest("optimize", params, common, start).to_json();
  out << j.dump(2) << "\n";
  return kExitOk;
}

int run_moments(std::uint64_t q, unsigned k, const SpecOptions& so, double tol, bool no_cache, const Common& common,
                Clock::time_point start, std::ostream& out, std::ostream& err) {
  const auto spec = so.build(k);
  const auto store = open_cache(common, no_cache);
  moments::FamilyOptions options;
  options.jobs = common.jobs;
  options.cache = store.get();
  const auto report = moments::moment_report(q, k, spec, {}, tol, options);

  json params = so.to_json();
  params["q"] = q;
  params["k"] = k;
  params["tol"] = tol;
  out << report.to_json(manifest("moments", params, common, start).to_json().dump()) << "\n";

  // Cauchy's inequality must hold on the computed data.
  if (report.cauchy_bound > static_cast<double>(report.nonvanishing_count + report.error_dominated_count) + 1e-9) {
    err << "check failed: Cauchy bound " << report.cauchy_bound << " exceeds the non-vanishing count\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int run_scan(const std::vector<std::uint64_t>& qs, const std::vector<unsigned>& ks, const SpecOptions& so,
             double tol, bool no_cache, const Common& common, std::ostream& out, std::ostream& err) {
  const auto store = open_cache(common, no_cache);
  moments::FamilyOptions options;
  options.jobs = common.jobs;
  options.cache = store.get();
  bool ok = true;
  out << "q,k,family_size,S1_ratio,S2_ratio,cauchy_fraction,nonvanishing_fraction\n";
  for (const std::uint64_t q : qs) {
    for (const unsigned k : ks) {
      const auto spec = so.build(k);
      const auto r = moments::moment_report(q, k, spec, {}, tol, options);
      const double size = static_cast<double>(r.family_size);
      const double s1 = (r.S1_empirical / r.S1_predicted).real();
      const double s2 = r.S2_empirical / r.S2_predicted;
      out << q << "," << k << "," << r.family_size << "," << sci(s1) << "," << sci(s2) << ","
          << sci(size > 0 ? r.cauchy_bound / size : 0.0) << ","
          << sci(size > 0 ? static_cast<double>(r.nonvanishing_count) / size : 0.0) << "\n";
      if (r.cauchy_bound > static_cast<double>(r.nonvanishing_count + r.error_dominated_count) + 1e-9) {
        err << "check failed: Cauchy bound exceeds the non-vanishing count at q=" << q << " k=" << k << "\n";
        ok = false;
      }
    }
  }
  return ok ? kExitOk : kExitCheckFailed;
}

void print_suite(const SuiteResult& s, std::ostream& os) {
  os << (s.passed ? "PASS " : "FAIL ") << s.name << " cases=" << s.cases << " worst=" << std::setprecision(6)
     << s.worst << " tolerance=" << s.tolerance;
  if (!s.detail.empty()) os << " (" << s.detail << ")";
  os << "\n";
}

int run_verify_lemmas(const std::string& grid, std::ostream& out, std::ostream& err) {
  const auto suite =
      lemma_suite(grid == "small" ? asymptotics::GridSize::small : asymptotics::GridSize::full);
  out << "lemma,d,f,j,y,q,exact,main,relative_gap,envelope\n";
  for (const auto& r : suite.records)
    out << r.lemma << "," << r.d << "," << r.f << "," << r.j << "," << sci(r.y) << "," << r.q << "," << sci(r.exact)
        << "," << sci(r.main) << "," << sci(r.relative_gap) << "," << sci(r.envelope) << "\n";
  for (const auto& c : suite.checks) print_suite(c, err);
  return suite.passed() ? kExitOk : kExitCheckFailed;
}

int run_verify_identities(std::uint64_t q_max, const Common& common, std::ostream& out) {
  std::vector<std::uint64_t> fe_moduli;
  for (const std::uint64_t q : {5ULL, 8ULL, 101ULL})
    if (q <= q_max) fe_moduli.push_back(q);
  const std::vector<SuiteResult> suites = {
      orthogonality_suite(q_max, 50, common.jobs),
      primitive_count_suite(q_max, common.jobs),
      gauss_sum_suite(q_max, common.jobs),
      functional_equation_suite(fe_moduli, 20, {}, common.jobs),
  };
  bool ok = true;
  for (const auto& s : suites) {
    print_suite(s, out);
    ok = ok && s.passed;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int run_cache_list(const Common& common, std::ostream& out) {
  const cache::LValueCache store(cache_directory(common));
  out << "# " << store.directory().string() << "\n";
  out << "q,key,count,bytes,valid\n";
  for (const auto& e : store.list())
    out << e.q << "," << e.key << "," << e.count << "," << e.bytes << "," << (e.valid ? "true" : "false") << "\n";
  return kExitOk;
}

int run_cache_clear(std::optional<std::uint64_t> q, const Common& common, std::ostream& out) {
  const cache::LValueCache store(cache_directory(common));
  if (q) {
    out << (store.clear(*q) ? "removed " : "no entry for ") << store.file_for(*q).string() << "\n";
  } else {
    out << "removed " << store.clear_all() << " file(s) from " << store.directory().string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  CLI::App app{"Mollified moments of derivatives of Dirichlet L-functions at the central point", "mollified"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", tool_version());

  Common common;
  app.add_option("--jobs", common.jobs, "Worker threads (0: available parallelism)")->capture_default_str();
  app.add_option("--cache-dir", common.cache_dir,
                 std::string("L-value cache directory (else $") + cache::kEnvironmentVariable + ")");

  auto* table1 = app.add_subcommand("table1", "Non-vanishing proportions P_k* against the reference table");
  double t1_theta = optimizer::kTableTheta;
  std::string t1_format = "pretty";
  table1->add_option("--theta", t1_theta, "Length exponent")->capture_default_str();
  table1->add_option("--format", t1_format)->check(CLI::IsMember({"pretty", "csv", "json"}))->capture_default_str();

  auto* optimize = app.add_subcommand("optimize", "Closed-form optimum of F_k as JSON");
  unsigned opt_k = 1;
  double opt_theta = 0.49;
  unsigned opt_degree = 9;
  optimize->add_option("--k", opt_k, "Derivative order")->required();
  optimize->add_option("--theta", opt_theta)->capture_default_str();
  optimize->add_option("--degree,--optimal-degree", opt_degree, "Degree of the truncated profile")
      ->capture_default_str();

  auto* chars = app.add_subcommand("characters", "Group structure and even primitive characters as JSON");
  std::uint64_t ch_q = 0;
  chars->add_option("--q", ch_q, "Modulus")->required()->check(CLI::PositiveNumber);

  auto* moments_cmd = app.add_subcommand("moments", "Mollified moments S1, S2 and the Cauchy bound as JSON");
  std::uint64_t m_q = 0;
  unsigned m_k = 1;
  double m_tol = moments::kDefaultTolerance;
  bool m_no_cache = false;
  SpecOptions m_spec;
  moments_cmd->add_option("--q", m_q, "Modulus")->required();
  moments_cmd->add_option("--k", m_k, "Derivative order")->required()->check(CLI::PositiveNumber);
  moments_cmd->add_option("--tol", m_tol, "Non-vanishing threshold")->capture_default_str();
  moments_cmd->add_flag("--no-cache", m_no_cache, "Neither read nor write the L-value cache");
  m_spec.attach(moments_cmd);

  auto* scan = app.add_subcommand("scan", "Moment ratios over several moduli as CSV");
  std::vector<std::uint64_t> s_qs;
  std::vector<unsigned> s_ks = {1};
  double s_tol = moments::kDefaultTolerance;
  bool s_no_cache = false;
  SpecOptions s_spec;
  scan->add_option("--q-list", s_qs, "Comma-separated moduli")->required()->delimiter(',');
  scan->add_option("--k", s_ks, "Comma-separated derivative orders")->delimiter(',')->capture_default_str();
  scan->add_option("--tol", s_tol, "Non-vanishing threshold")->capture_default_str();
  scan->add_flag("--no-cache", s_no_cache, "Neither read nor write the L-value cache");
  s_spec.attach(scan);

  auto* lemmas = app.add_subcommand("verify-lemmas", "Auxiliary-sum checks: CSV records, summary on stderr");
  std::string l_grid = "full";
  lemmas->add_option("--grid", l_grid)->check(CLI::IsMember({"small", "full"}))->capture_default_str();

  auto* identities = app.add_subcommand("verify-identities", "Orthogonality, primitive-count, Gauss-sum and "
                                                             "functional-equation suites");
  std::uint64_t i_qmax = 200;
  identities->add_option("--q-max", i_qmax, "Largest modulus")->capture_default_str()->check(CLI::PositiveNumber);

  auto* cache_cmd = app.add_subcommand("cache", "Inspect or clear the L-value cache");
  cache_cmd->require_subcommand(1, 1);
  auto* cache_list = cache_cmd->add_subcommand("list", "List cached moduli");
  auto* cache_clear = cache_cmd->add_subcommand("clear", "Remove cached moduli");
  std::optional<std::uint64_t> c_q;
  cache_clear->add_option("--q", c_q, "Only this modulus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*table1) return run_table1(t1_theta, t1_format, out);
    if (*optimize) return run_optimize(opt_k, opt_theta, opt_degree, common, start, out);
    if (*chars) return run_characters(ch_q, common, start, out);
    if (*moments_cmd) return run_moments(m_q, m_k, m_spec, m_tol, m_no_cache, common, start, out, err);
    if (*scan) return run_scan(s_qs, s_ks, s_spec, s_tol, s_no_cache, common, out, err);
    if (*lemmas) return run_verify_lemmas(l_grid, out, err);
    if (*identities) return run_verify_identities(i_qmax, common, out);
    if (*cache_list) return run_cache_list(common, out);
    if (*cache_clear) return run_cache_clear(c_q, common, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"mollified"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mollified::cli
