// hiw: command-line driver for the plus-space, L-function, kernel and sup-norm experiments.

#include "hiw/amplifier.hpp"
#include "hiw/bergman.hpp"
#include "hiw/kohnen_zagier.hpp"
#include "hiw/supnorm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>
#include <variant>

using namespace hiw;
using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::string anchor;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// first failing check, empty when every check passed
  std::string failure;

  void fail(const std::string& what) {
    if (failure.empty()) failure = what;
  }
};

struct RunConfig {
  std::string command;
  std::string k = "13/2";
  std::string k_range;
  int prec = 0;
  double tol = 0;
  std::string out;
  std::string format = "csv";
  int threads = 1;
};

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, double>) return number(v);
        else return std::to_string(v);
      },
      c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void emit(const Table& t, const RunConfig& cfg) {
  std::ostringstream os;
  if (cfg.format == "json") {
    json meta = {{"command", cfg.command}, {"anchor", t.anchor}, {"k", cfg.k_range.empty() ? cfg.k : cfg.k_range},
                 {"prec", cfg.prec}, {"tol", cfg.tol}, {"status", t.failure.empty() ? "pass" : "fail: " + t.failure}};
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = json::object();
      for (std::size_t i = 0; i < r.size(); ++i)
        std::visit([&](const auto& v) { row[t.columns[i]] = v; }, r[i]);
      rows.push_back(row);
    }
    os << json{{"meta", meta}, {"rows", rows}}.dump(2) << "\n";
  } else {
    os << "# anchor: " << t.anchor << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(r[i]));
      os << "\n";
    }
  }
  if (cfg.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw std::runtime_error("cannot open " + cfg.out);
    f << os.str();
  }
}

Weight parse_weight(const std::string& text) {
  Weight k;
  try {
    k = Weight::parse(text);
  } catch (const std::exception&) {
    throw UsageError("invalid weight '" + text + "'");
  }
  if (!k.is_half_integral() || k.twice() < 5) throw UsageError("weight must be a half-integer >= 5/2, got " + text);
  return k;
}

/// "13/2" or "13/2:25/2" (step 1).
std::vector<Weight> weight_list(const RunConfig& cfg) {
  if (cfg.k_range.empty()) return {parse_weight(cfg.k)};
  const auto colon = cfg.k_range.find(':');
  if (colon == std::string::npos) throw UsageError("--k-range expects lo:hi");
  const Weight lo = parse_weight(cfg.k_range.substr(0, colon)), hi = parse_weight(cfg.k_range.substr(colon + 1));
  if (hi.twice() < lo.twice()) throw UsageError("--k-range: hi below lo");
  std::vector<Weight> out;
  for (int t = lo.twice(); t <= hi.twice(); t += 2) out.push_back(Weight::from_twice(t));
  return out;
}

/// Runs job(i) for i < n on a fixed pool; results are collected in index order.
template <class R>
std::vector<R> parallel_map(std::size_t n, int threads, const std::function<R(std::size_t)>& job) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int t = 1; t < std::max(1, threads); ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::shared_ptr<const ThetaPowerTable> table_for(Weight k, int index) {
  return std::make_shared<const ThetaPowerTable>(k.twice(), index);
}

std::vector<HalfIntegralForm> forms_for(Weight k, int table_index = 1600, int partner = 1100) {
  EigenbasisOptions opt;
  opt.partner_precision = partner;
  return eigenbasis_plus(table_for(k, table_index), k, opt, nullptr);
}

Table cmd_basis(const RunConfig& cfg) {
  Table t{"echelon basis of the plus space from theta monomials", {"k", "form", "n", "coefficient"}, {}, {}};
  for (Weight k : weight_list(cfg)) {
    const int prec = cfg.prec > 0 ? cfg.prec : sturm_bound(k) + 10;
    const auto b = cusp_plus_basis(k, prec);
    if (b.dimension() != level_one_cusp_dimension(k.shimura_weight())) t.fail("dimension identity at k=" + k.str());
    for (int i = 0; i < b.dimension(); ++i)
      for (int n = 0; n <= prec; ++n) t.rows.push_back({k.str(), std::int64_t{i}, std::int64_t{n}, b.forms[i][n].str()});
  }
  return t;
}

Table cmd_eigen(const RunConfig& cfg) {
  Table t{"Hecke eigenforms and the Shimura partner eigenvalues",
          {"k", "form", "field", "p", "lambda_p2", "deligne_normalised"},
          {}, {}};
  for (Weight k : weight_list(cfg)) {
    const auto fs = forms_for(k, 400, 250);
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (int p : {3, 5, 7, 11, 13}) {
        const double lam = fs[i].partner.numeric(p);
        const double a = lam / std::pow(p, (k.shimura_weight() - 1) / 2.0);
        if (std::fabs(a) > 2 + 1e-9) t.fail("Deligne bound at k=" + k.str() + " p=" + std::to_string(p));
        t.rows.push_back({k.str(), static_cast<std::int64_t>(i), poly_to_string(fs[i].field->modulus()),
                          std::int64_t{p}, lam, a});
      }
  }
  return t;
}

Table cmd_shimura_check(const RunConfig& cfg, int d_max, int n_max) {
  Table t{"square-class coefficient relation through the Shimura lift",
          {"k", "form", "D", "checked", "leading_zero", "pass"}, {}, {}};
  for (Weight k : weight_list(cfg)) {
    const auto fs = forms_for(k, d_max * n_max * n_max, std::max(250, n_max));
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::int64_t a = 1; a <= d_max; ++a) {
        const std::int64_t D = k.plus_sign() * a;
        if (!is_fundamental_discriminant(D)) continue;
        const auto r = verify_sqrcoeff(fs[i], D, n_max);
        if (!r.pass) t.fail("coefficient relation at k=" + k.str() + " D=" + std::to_string(D));
        t.rows.push_back({k.str(), static_cast<std::int64_t>(i), D, std::int64_t{r.checked}, r.leading_zero, r.pass});
      }
  }
  return t;
}

Table cmd_kz(const RunConfig& cfg, const std::vector<std::int64_t>& discriminants) {
  Table t{"Kohnen-Zagier central value formula",
          {"k", "form", "D", "skipped", "lhs", "rhs", "discrepancy", "central_value", "root_number"}, {}, {}};
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-3;
  for (Weight k : weight_list(cfg)) {
    const auto fs = forms_for(k);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto& f = fs[i];
      const auto nd = norm_data(f);
      for (auto d : discriminants) {
        const std::int64_t D = k.plus_sign() * (d < 0 ? -d : d);
        const auto row = kohnen_zagier_check(f, nd, D);
        if (!row.skipped && !(row.discrepancy < tol)) t.fail("Kohnen-Zagier at D=" + std::to_string(D));
        t.rows.push_back({k.str(), static_cast<std::int64_t>(i), D, row.skipped,
                          row.lhs.to_double(), row.rhs.to_double(), row.discrepancy,
                          row.central.value.to_double(), std::int64_t{row.central.root_number}});
      }
    }
  }
  return t;
}

struct ScannedForm {
  Weight k;
  std::size_t index = 0;
  double norm = 0;
  HalfIntegralForm form;
  ScanResult scan;
};

std::vector<ScannedForm> scan_forms(const RunConfig& cfg) {
  std::vector<std::vector<HalfIntegralForm>> per_weight;
  for (Weight k : weight_list(cfg)) per_weight.push_back(forms_for(k));
  std::vector<std::pair<std::size_t, std::size_t>> refs;
  for (std::size_t w = 0; w < per_weight.size(); ++w)
    for (std::size_t i = 0; i < per_weight[w].size(); ++i) refs.emplace_back(w, i);
  return parallel_map<ScannedForm>(refs.size(), cfg.threads, [&](std::size_t j) {
    const auto& f = per_weight[refs[j].first][refs[j].second];
    ScannedForm s{f.weight, refs[j].second, petersson_norm_f(f, NormMethod::Quadrature).to_double(), f, {}};
    s.scan = supnorm_scan(FrameSet::from_coefficients(f.numeric_coefficients(1500), f.weight));
    return s;
  });
}

Table cmd_supnorm(const RunConfig& cfg) {
  Table t{"three-cusp sup-norm scan over y >= sqrt(3)/8",
          {"k", "form", "frame", "x", "y", "log_sup", "log_sup_normalised", "near_cusp", "on_boundary", "fourier_check"},
          {}, {}};
  for (const auto& s : scan_forms(cfg)) {
    const double log_sup = static_cast<double>(s.scan.sup.log_abs());
    bool fourier = true;
    for (std::int64_t n = 1; n <= 24; ++n) {
      if (!plus_admissible(s.k, n)) continue;
      const double c = static_cast<double>(s.form.coefficient(n).embed(s.form.embedding));
      fourier = fourier && fourier_lower_check(c, n, s.k, s.scan.sup).holds;
    }
    if (!fourier) t.fail("Fourier lower bound at k=" + s.k.str());
    t.rows.push_back({s.k.str(), static_cast<std::int64_t>(s.index), to_string(s.scan.frame), s.scan.argmax.real(),
                      s.scan.argmax.imag(), log_sup, log_sup - 0.5 * std::log(s.norm), s.scan.near_cusp,
                      s.scan.on_boundary, fourier});
  }
  return t;
}

Table cmd_counts(const RunConfig& cfg, Complex z, std::int64_t L, const std::vector<double>& deltas) {
  Table t{"matrix counts M, M*, M_u, M_p in G_l(4) balls", {"x", "y", "l", "delta", "M", "Mstar", "Mu", "Mp"}, {}, {}};
  if (!(z.imag() > 0)) throw UsageError("--z must lie in the upper half plane");
  std::vector<std::pair<std::int64_t, double>> items;
  for (std::int64_t r = 1; r * r <= L; ++r)
    for (double d : deltas) items.emplace_back(r * r, d);
  auto recs = parallel_map<CountRecord>(items.size(), cfg.threads, [&](std::size_t i) {
    return count_matrices(z, items[i].first, items[i].second, false);
  });
  for (const auto& r : recs)
    t.rows.push_back({z.real(), z.imag(), r.l, r.delta, r.M, r.M_star, r.M_u, r.M_p});
  return t;
}

Table cmd_kernel_check(const RunConfig& cfg, int pairs) {
  Table t{"reproducing kernel: geometric sum against orthonormal basis",
          {"k", "zx", "zy", "wx", "wy", "geometric_re", "geometric_im", "spectral_re", "spectral_im", "rel_err", "terms"},
          {}, {}};
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-3;
  for (Weight k : weight_list(cfg)) {
    const auto spectral = SpectralKernel::build(k);
    const double cut = bergman_cutoff(k, 1e-6);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.5, 1.5);
    for (int i = 0; i < pairs; ++i) {
      const Complex z(ux(rng), uy(rng)), w(ux(rng), uy(rng));
      const auto geo = bergman_geometric(z, w, k, cut);
      const Complex spec = spectral(z, w);
      const double err = std::abs(geo.value - spec) / std::abs(spec);
      if (!(err < tol)) t.fail("kernel mismatch at k=" + k.str());
      t.rows.push_back({k.str(), z.real(), z.imag(), w.real(), w.imag(), geo.value.real(), geo.value.imag(), spec.real(),
                        spec.imag(), err, static_cast<std::int64_t>(geo.terms)});
    }
  }
  return t;
}

Table cmd_amplify(const RunConfig& cfg, const std::vector<double>& lambdas) {
  Table t{"amplified pretrace inequality at the sup-norm argmax",
          {"k", "form", "Lambda", "set", "term1", "term2", "term3", "term4", "lhs", "rhs", "rhs_tail_estimate", "holds"},
          {}, {}};
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
  for (const auto& s : scan_forms(cfg)) {
    auto A = [&](std::int64_t m) { return normalised_eigenvalue(s.form, m); };
    for (double lambda : lambdas)
      for (auto kind : {AmplifierSet::M1, AmplifierSet::M2}) {
        const auto spec = amplifier_build(lambda, kind, A);
        AmplifiedOptions opt;
        const auto c = amplified_check(s.scan.sup, s.norm, s.scan.argmax, s.k, spec, amplifier_weight(spec, A), opt, tol);
        if (!c.holds) t.fail("amplified inequality at k=" + s.k.str() + " Lambda=" + number(lambda));
        const auto terms = sup_bookkeeping(lambda, s.scan.argmax.imag(), s.k);
        t.rows.push_back({s.k.str(), static_cast<std::int64_t>(s.index), lambda, to_string(kind), terms[0], terms[1],
                          terms[2], terms[3], c.lhs.to_double(), c.rhs.value.to_double(), c.rhs.tail_estimate, c.holds});
      }
  }
  return t;
}

Table cmd_scaling(const RunConfig& cfg, const std::string& lo, const std::string& hi) {
  Table t{"weight scaling of (k/4pi)^k e^{-k} sum_j |f_j(1)|^2",
          {"row", "k", "log_S", "bessel_factor", "bessel_lower", "slope"}, {}, {}};
  std::vector<Weight> ks;
  for (int w = parse_weight(lo).twice(); w <= parse_weight(hi).twice(); w += 2) ks.push_back(Weight::from_twice(w));
  const auto rep = scaling_experiment(ks, cfg.tol > 0 ? cfg.tol : 1e-12);
  for (const auto& r : rep.rows) {
    if (r.k.value() >= 21 && (r.bessel_bracket < 0.9 || r.bessel_bracket > 1.1)) t.fail("Bessel factor at k=" + r.k.str());
    t.rows.push_back({std::string("weight"), r.k.str(), static_cast<double>(r.s.value.log_abs()), r.bessel_bracket,
                      r.bessel_lower, std::string()});
  }
  if (rep.rows.size() >= 2) {
    if (rep.fit.slope < 1.3 || rep.fit.slope > 1.7) t.fail("slope outside [1.3, 1.7]");
    t.rows.push_back({std::string("fit"), lo + ":" + hi, std::string(), std::string(), std::string(), number(rep.fit.slope)});
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-integral weight plus-space experiments"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "weight as a half-integer, e.g. 13/2");
    sub->add_option("--k-range", cfg.k_range, "inclusive weight range lo:hi");
    sub->add_option("--prec", cfg.prec, "precision override");
    sub->add_option("--tol", cfg.tol, "tolerance override");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  int d_max = 24, n_max = 30, pairs = 5;
  std::vector<std::int64_t> discriminants{1, 5, 8, 12, 13, 17};
  std::vector<double> lambdas{3, 5}, deltas{0.1, 1, 10};
  std::vector<double> zxy{0, 1};
  std::int64_t L = 81;
  std::string lo = "13/2", hi = "61/2";

  std::map<std::string, std::function<Table()>> run;
  auto add = [&](const std::string& name, const std::string& help, std::function<Table()> body) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    run[name] = std::move(body);
    return sub;
  };
  add("basis", "exact echelon basis of S_k^+", [&] { return cmd_basis(cfg); });
  add("eigen", "Hecke eigenforms and eigenvalues", [&] { return cmd_eigen(cfg); });
  auto* shim = add("shimura-check", "coefficient relation over fundamental discriminants",
                   [&] { return cmd_shimura_check(cfg, d_max, n_max); });
  shim->add_option("--d-max", d_max, "largest |D|");
  shim->add_option("--n-max", n_max, "largest n");
  add("kz", "Kohnen-Zagier check", [&] { return cmd_kz(cfg, discriminants); })
      ->add_option("--d", discriminants, "discriminants")->delimiter(',');
  add("supnorm", "sup-norm scan", [&] { return cmd_supnorm(cfg); });
  auto* counts = add("counts", "matrix counts", [&] { return cmd_counts(cfg, {zxy.at(0), zxy.at(1)}, L, deltas); });
  counts->add_option("--z", zxy, "point as x,y")->delimiter(',')->expected(2);
  counts->add_option("--L", L, "largest square l");
  counts->add_option("--delta", deltas, "radii")->delimiter(',');
  add("kernel-check", "reproducing kernel comparison", [&] { return cmd_kernel_check(cfg, pairs); })
      ->add_option("--pairs", pairs, "random (z, w) pairs");
  add("amplify", "amplified inequality", [&] { return cmd_amplify(cfg, lambdas); })
      ->add_option("--lambda", lambdas, "amplifier lengths")->delimiter(',');
  auto* scaling = add("scaling", "weight scaling experiment", [&] { return cmd_scaling(cfg, lo, hi); });
  scaling->add_option("k_min", lo, "smallest weight");
  scaling->add_option("k_max", hi, "largest weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    Table t = run.at(cfg.command)();
    emit(t, cfg);
    if (!t.failure.empty()) {
      std::cerr << "check failed: " << t.failure << "\n";
      return 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
