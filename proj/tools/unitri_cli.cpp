#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "unitri/comparison.hpp"
#include "unitri/paths.hpp"
#include "unitri/spectral.hpp"
#include "unitri/supercharacter.hpp"
#include "unitri/superclass.hpp"
#include "unitri/walk.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace unitri;

struct RunOptions {
  int n = 3;
  std::int64_t p = 5;
  std::string walk = "P";
  std::int64_t t = 0;
  std::int64_t t_max = 20;
  double eps = -1.0;  // negative means unset
  std::string format = "csv";
  std::string out;
  bool exact = false;
  int jobs = 1;
  std::string config_path;
  std::string bound_kind = "fourier";  // bound-curve only
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) return fmt17(v.get<double>());
  return v.dump();
}

// One output table: fixed column order, one JSON object per row.
struct Table {
  std::vector<std::string> columns;
  std::vector<json> rows;

  json& add_row() {
    rows.emplace_back(json::object());
    return rows.back();
  }

  std::string render_csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const json& row : rows) {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        os << (c ? "," : "");
        if (row.contains(columns[c])) os << csv_field(row.at(columns[c]));
      }
      os << '\n';
    }
    return os.str();
  }

  std::string render_json() const {
    json doc = json::array();
    for (const json& row : rows) doc.push_back(row);
    return doc.dump(2) + "\n";
  }
};

std::string effective_config(const RunOptions& o, bool with_bound_kind) {
  std::ostringstream os;
  if (with_bound_kind) os << "bound=" << o.bound_kind << '\n';
  if (o.eps >= 0.0) os << "eps=" << fmt17(o.eps) << '\n';
  os << "exact=" << (o.exact ? "true" : "false") << '\n';
  os << "format=" << o.format << '\n';
  os << "jobs=" << o.jobs << '\n';
  os << "n=" << o.n << '\n';
  os << "p=" << o.p << '\n';
  os << "t=" << o.t << '\n';
  os << "t-max=" << o.t_max << '\n';
  os << "walk=" << o.walk << '\n';
  return os.str();
}

void emit(const Table& table, const RunOptions& o, bool with_bound_kind) {
  const std::string body =
      o.format == "json" ? table.render_json() : table.render_csv();
  if (o.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file " + o.out);
  file << body;
  std::ofstream cfg(o.out + ".cfg", std::ios::binary);
  cfg << effective_config(o, with_bound_kind);
}

void add_common(CLI::App* sub, RunOptions& o) {
  // Config tokens are spliced ahead of explicit flags, so every option
  // takes the last value it sees.
  const auto last = [](CLI::Option* opt) {
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return opt;
  };
  last(sub->add_option("--n", o.n, "Matrix size (factor count for productQ)"));
  last(sub->add_option("--p", o.p, "Odd prime modulus"));
  last(sub->add_option("--walk", o.walk, "Walk kind"))
      ->check(CLI::IsMember({"P", "Q", "K", "productQ"}));
  last(sub->add_option("--t", o.t, "First step of the scan"));
  last(sub->add_option("--t-max", o.t_max, "Last step of the scan"));
  last(sub->add_option("--eps", o.eps, "Mixing threshold"));
  last(sub->add_option("--format", o.format, "Output format"))
      ->check(CLI::IsMember({"csv", "json"}));
  last(sub->add_option("--out", o.out, "Output path (stdout when omitted)"));
  sub->add_flag("--exact", o.exact, "Integer-count convolution")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  last(sub->add_option("--jobs", o.jobs, "Worker threads"))
      ->check(CLI::PositiveNumber);
  last(sub->add_option("--config", o.config_path,
                       "Flat key=value config file; explicit flags override it"));
}

// Convert a flat key=value file into option tokens.  They are spliced in
// ahead of the explicit flags, so the command line wins on conflicts.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::FileError(path + ": line without '=': " + line);
    tokens.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
  }
  return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> expanded, from_file, rest;
  if (!args.empty()) expanded.push_back(args[0]);  // subcommand name
  for (std::size_t k = 1; k < args.size(); ++k) {
    std::string path;
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
      continue;
    }
    const auto tokens = config_tokens(path);
    from_file.insert(from_file.end(), tokens.begin(), tokens.end());
  }
  expanded.insert(expanded.end(), from_file.begin(), from_file.end());
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

WalkSpec spec_from(const RunOptions& o) {
  return make_walk_spec(walk_kind_from_name(o.walk), o.n, PrimeModulus(o.p));
}

int run_tv_curve(const RunOptions& o) {
  const WalkSpec spec = spec_from(o);
  WalkEvolution ev(spec, o.exact, o.jobs);
  Table table;
  table.columns = {"t", "tv", "l2sq"};
  if (o.eps >= 0.0) table.columns.push_back("mixed");
  for (std::int64_t t = 0; t <= o.t_max; ++t) {
    if (t >= o.t) {
      json& row = table.add_row();
      row["t"] = t;
      row["tv"] = ev.tv();
      row["l2sq"] = ev.l2sq();
      if (o.eps >= 0.0) row["mixed"] = ev.tv() < o.eps ? 1 : 0;
    }
    if (t < o.t_max) ev.advance();
  }
  emit(table, o, false);
  return 0;
}

int run_bound_curve(const RunOptions& o) {
  PrimeModulus p(o.p);
  const std::int64_t a = closest_odd_sqrt(p);
  Table table;
  const bool both = o.bound_kind == "both";
  if (both)
    table.columns = {"t", "fourier_rhs", "main_rhs"};
  else
    table.columns = {"t", "rhs"};

  std::optional<FourierBound> fourier;
  if (o.bound_kind != "main") fourier.emplace(o.n, p, a);
  std::optional<MainBound> main_bound;
  if (o.bound_kind != "fourier") main_bound.emplace(o.n, p);

  for (std::int64_t t = o.t; t <= o.t_max; ++t) {
    json& row = table.add_row();
    row["t"] = t;
    if (both) {
      row["fourier_rhs"] = fourier->rhs(t);
      row["main_rhs"] = main_bound->rhs(t);
    } else if (fourier) {
      row["rhs"] = fourier->rhs(t);
    } else {
      row["rhs"] = main_bound->rhs(t);
    }
  }
  emit(table, o, true);
  return 0;
}

int run_spectrum(const RunOptions& o) {
  const WalkSpec spec = spec_from(o);
  const Spectrum spectrum = transition_spectrum(spec);
  Table table;
  table.columns = {"k", "lambda"};
  for (Eigen::Index k = 0; k < spectrum.values.size(); ++k) {
    json& row = table.add_row();
    row["k"] = static_cast<std::int64_t>(k);
    row["lambda"] = spectrum.values[k];
  }
  emit(table, o, false);
  return 0;
}

int run_superclasses(const RunOptions& o) {
  PrimeModulus p(o.p);
  Table table;
  table.columns = {"cells", "phi", "d", "i", "weight"};
  std::uint64_t total = 0;
  for_each_label(o.n, p, [&](const SuperClassLabel& label) {
    json& row = table.add_row();
    std::ostringstream cells, phi;
    for (std::size_t k = 0; k < label.cells.size(); ++k) {
      cells << (k ? " " : "") << label.cells[k].first << ':'
            << label.cells[k].second;
      phi << (k ? " " : "") << label.phi[k];
    }
    const std::uint64_t weight = degree_term(label, p);
    row["cells"] = cells.str();
    row["phi"] = phi.str();
    row["d"] = d_statistic(label);
    row["i"] = i_statistic(label);
    row["weight"] = weight;
    total += weight;
  });
  const std::uint64_t order = group_order(o.n, p);
  emit(table, o, false);
  if (total != order) {
    std::cerr << "invariant: degree identity failed: " << total
              << " != " << order << "\n";
    return 3;
  }
  return 0;
}

int run_words(const RunOptions& o) {
  PrimeModulus p(o.p);
  const std::int64_t a = closest_odd_sqrt(p);
  Table table;
  table.columns = {"i",      "x",      "element",          "length",
                   "parity", "max_multiplicity", "word"};
  std::ostringstream word_lines;
  for (int i = 1; i < o.n; ++i) {
    std::vector<std::int64_t> seen;
    for (auto [sign, times_a] :
         {std::pair<int, bool>{1, false}, {-1, false}, {1, true}, {-1, true}}) {
      const std::int64_t x = mod_reduce(sign * (times_a ? a : 1), p.p);
      if (std::find(seen.begin(), seen.end(), x) != seen.end()) continue;
      seen.push_back(x);
      for (const auto& b : conjugacy_class_elements(i, x, o.n, p)) {
        const GeneratorWord w = word_class_element(b, i, sign, times_a);
        if (!(eval_word(w, o.n, p) == b))
          throw std::logic_error("class word does not evaluate to its element");
        const WordStats stats = word_stats(w, o.n);
        const std::string text = format_word(w);
        json& row = table.add_row();
        row["i"] = i;
        row["x"] = x;
        row["element"] = encode_index(b);
        row["length"] = stats.length;
        row["parity"] = stats.parity;
        row["max_multiplicity"] = stats.max_multiplicity;
        row["word"] = text;
        word_lines << text << '\n';
      }
    }
  }
  emit(table, o, false);
  if (!o.out.empty()) {
    // Companion word file, one word per line.
    std::ofstream words(o.out + ".words", std::ios::binary);
    words << word_lines.str();
  }
  return 0;
}

int run_compare(const RunOptions& o) {
  PrimeModulus p(o.p);
  const ComparisonReport report = comparison_constant(o.n, p);
  Table table;
  table.columns = {"row", "sign", "load_num", "load", "inv_prob", "product"};
  for (const ComparisonRow& r : report.rows) {
    json& row = table.add_row();
    row["row"] = r.z.row;
    row["sign"] = r.z.sign;
    row["load_num"] = r.load_num;
    row["load"] = r.load;
    row["inv_prob"] = r.inv_prob;
    row["product"] = r.product;
  }
  emit(table, o, false);
  std::cerr << "A=" << report.a_num << "/" << report.a_den << " ("
            << fmt17(report.A) << "), argmax " << (report.argmax.sign < 0 ? '-' : '+')
            << report.argmax.row << "\n";
  const std::uint64_t states = group_order(o.n, p);
  if (states <= kSpectralBudget) {
    const SpectralComparisonCheck check = spectral_comparison_check(o.n, p);
    std::cerr << "spectral check min_slack=" << fmt17(check.min_slack) << "\n";
    if (!check.ok) {
      std::cerr << "invariant: spectral comparison certificate failed\n";
      return 3;
    }
  }
  return 0;
}

struct VerifyOutcome {
  Table table;
  int failures = 0;

  void record(const std::string& name, bool pass, double value, double tol) {
    json& row = table.add_row();
    row["check"] = name;
    row["status"] = pass ? "PASS" : "FAIL";
    row["value"] = value;
    row["tolerance"] = tol;
    if (!pass) ++failures;
  }

  void skip(const std::string& name) {
    json& row = table.add_row();
    row["check"] = name;
    row["status"] = "SKIP";
    row["value"] = 0.0;
    row["tolerance"] = 0.0;
  }
};

void verify_kernels(const RunOptions& o, VerifyOutcome& out) {
  PrimeModulus p(o.p);
  for (WalkKind kind :
       {WalkKind::P, WalkKind::Q, WalkKind::K, WalkKind::ProductQ}) {
    const WalkSpec spec = make_walk_spec(kind, o.n, p);
    const WalkKernel kernel = build_kernel(spec);
    std::uint64_t total = 0;
    for (std::uint64_t w : kernel.num) total += w;
    double mass = 0.0;
    for (double w : kernel.prob) mass += w;
    const double dev = std::abs(mass - 1.0) +
                       (total == kernel.denom ? 0.0 : 1.0);
    out.record(std::string("kernel-mass-") + walk_kind_name(kind), dev <= 1e-12,
               dev, 1e-12);
  }
}

void verify_walk(const RunOptions& o, VerifyOutcome& out) {
  PrimeModulus p(o.p);
  const std::int64_t horizon = std::min<std::int64_t>(o.t_max, 20);

  // Exact mass conservation and inverse symmetry for the class walk.
  {
    const WalkSpec spec = make_walk_spec(WalkKind::Q, o.n, p);
    ExactDistribution d = exact_point_mass(spec);
    Convolver conv(build_kernel(spec), o.jobs);
    for (int t = 0; t < 4; ++t) conv.step(d);
    Uint128 total = 0;
    for (const Uint128& c : d.counts) total += c;
    out.record("walk-mass-exact", total == d.denom,
               total == d.denom ? 0.0 : 1.0, 0.0);

    double asym = 0.0;
    for (std::uint64_t idx = 0; idx < d.counts.size(); ++idx) {
      const std::uint64_t inv =
          encode_index(mat_inv(decode_index(idx, spec.n, p)));
      if (d.counts[idx] != d.counts[inv]) asym += 1.0;
    }
    out.record("walk-inverse-symmetry", asym == 0.0, asym, 0.0);
  }

  // Total variation to uniform never increases.
  {
    WalkEvolution ev(make_walk_spec(WalkKind::P, o.n, p), o.exact, o.jobs);
    double prev = ev.tv();
    double worst = 0.0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      ev.advance();
      worst = std::max(worst, ev.tv() - prev);
      prev = ev.tv();
    }
    out.record("tv-monotone", worst <= 1e-12, worst, 1e-12);
  }

  // Before wraparound the symmetric superdiagonal residues sum to t mod 2.
  {
    const WalkSpec spec = make_walk_spec(WalkKind::P, o.n, p);
    const std::int64_t cap = std::min<std::int64_t>((o.p - 1) / 2, 4);
    ExactDistribution d = exact_point_mass(spec);
    Convolver conv(build_kernel(spec), o.jobs);
    double violations = 0.0;
    for (std::int64_t t = 0; t <= cap; ++t) {
      for (std::uint64_t idx = 0; idx < d.counts.size(); ++idx) {
        if (d.counts[idx] == 0) continue;
        const UniTriMatrix m = decode_index(idx, spec.n, p);
        std::int64_t s = 0;
        for (int i = 1; i < spec.n; ++i) s += mod_symmetric(m(i, i + 1), o.p);
        if (((s - t) % 2 + 2) % 2 != 0) violations += 1.0;
      }
      if (t < cap) conv.step(d);
    }
    out.record("parity-support", violations == 0.0, violations, 0.0);
  }
}

void verify_structure(const RunOptions& o, VerifyOutcome& out) {
  PrimeModulus p(o.p);
  const std::uint64_t order = group_order(o.n, p);

  const std::uint64_t identity = degree_identity_sum(o.n, p);
  out.record("degree-identity", identity == order,
             identity == order ? 0.0 : 1.0, 0.0);

  if (order <= 20000) {
    std::map<SuperClassLabel, std::uint64_t> fibers;
    for (std::uint64_t idx = 0; idx < order; ++idx)
      ++fibers[canonical_form(decode_index(idx, o.n, p))];
    std::uint64_t covered = 0;
    for (const auto& [label, size] : fibers) covered += size;
    const bool ok = covered == order && fibers.size() == count_labels(o.n, p);
    out.record("canonical-partition", ok, ok ? 0.0 : 1.0, 0.0);
  } else {
    out.skip("canonical-partition");
  }
}

void verify_words(const RunOptions& o, VerifyOutcome& out) {
  PrimeModulus p(o.p);
  const std::int64_t a = closest_odd_sqrt(p);
  double violations = 0.0;

  for (int i = 1; i + 2 <= o.n; ++i)
    for (std::int64_t b = 0; b < o.p; ++b) {
      const GeneratorWord w = word_second_diag(i, b, o.n, p);
      const auto s =
          static_cast<std::int64_t>(isqrt_u64(static_cast<std::uint64_t>(b)));
      if (!(eval_word(w, o.n, p) ==
            UniTriMatrix::elementary(o.n, p, i, i + 2, b)) ||
          w.length() % 2 != 0 ||
          w.length() > static_cast<std::size_t>(12 * s + 10))
        violations += 1.0;
    }
  out.record("second-diagonal-words", violations == 0.0, violations, 0.0);

  violations = 0.0;
  const std::uint64_t class_size = pow_u64_checked(
      static_cast<std::uint64_t>(o.p), static_cast<unsigned>(o.n - 2));
  const std::size_t stride = class_size <= 400 ? 1 : class_size / 64;
  for (int i = 1; i < o.n; ++i) {
    std::vector<std::int64_t> seen;
    for (auto [sign, times_a] :
         {std::pair<int, bool>{1, false}, {-1, false}, {1, true}, {-1, true}}) {
      const std::int64_t x = mod_reduce(sign * (times_a ? a : 1), o.p);
      if (std::find(seen.begin(), seen.end(), x) != seen.end()) continue;
      seen.push_back(x);
      const auto cls = conjugacy_class_elements(i, x, o.n, p);
      for (std::size_t k = 0; k < cls.size(); k += stride) {
        const GeneratorWord w = word_class_element(cls[k], i, sign, times_a);
        if (!(eval_word(w, o.n, p) == cls[k]) || w.length() % 2 != 1)
          violations += 1.0;
      }
    }
  }
  out.record("class-words", violations == 0.0, violations, 0.0);
}

void verify_spectral(const RunOptions& o, VerifyOutcome& out) {
  PrimeModulus p(o.p);
  const std::int64_t a = closest_odd_sqrt(p);

  // Chi-square identity for the cycle walk.
  {
    const WalkSpec spec = make_walk_spec(WalkKind::K, 1, p);
    WalkEvolution ev(spec, true, o.jobs);
    double worst = 0.0;
    for (std::int64_t t = 0; t <= 30; ++t) {
      double rhs = 0.0;
      for (std::int64_t x = 1; x < o.p; ++x)
        rhs += std::pow(k_eigenvalue(x, p, a), 2.0 * static_cast<double>(t));
      worst = std::max(worst,
                       std::abs(static_cast<double>(o.p) * ev.l2sq() - rhs));
      ev.advance();
    }
    out.record("chi-square-cycle", worst <= 1e-10, worst, 1e-10);
  }

  // The Fourier bound dominates the exact class-walk distance.
  {
    const WalkSpec spec = make_walk_spec(WalkKind::Q, o.n, p);
    FourierBound bound(o.n, p, a);
    WalkEvolution ev(spec, o.exact, o.jobs);
    const std::int64_t horizon = std::min<std::int64_t>(o.t_max, 20);
    double worst = -1.0;
    for (std::int64_t t = 0; t <= horizon; ++t) {
      worst = std::max(worst, 4.0 * ev.tv() * ev.tv() - bound.rhs(t));
      ev.advance();
    }
    out.record("fourier-dominance", worst <= 1e-12, worst, 1e-12);
  }

  if (group_order(o.n, p) <= kSpectralBudget) {
    const SpectralComparisonCheck check = spectral_comparison_check(o.n, p);
    out.record("comparison-certificate", check.ok, check.min_slack, 1e-8);
  } else {
    out.skip("comparison-certificate");
  }
}

int run_verify(const RunOptions& o) {
  VerifyOutcome out;
  out.table.columns = {"check", "status", "value", "tolerance"};
  verify_kernels(o, out);
  verify_walk(o, out);
  verify_structure(o, out);
  verify_words(o, out);
  verify_spectral(o, out);
  emit(out.table, o, false);
  if (out.failures > 0) {
    std::cerr << "invariant: " << out.failures << " check(s) failed\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact laboratory for random walks on unipotent matrix groups"};
  app.require_subcommand(1);

  std::map<std::string, RunOptions> opts;
  std::map<std::string, int (*)(const RunOptions&)> runners{
      {"tv-curve", run_tv_curve},     {"bound-curve", run_bound_curve},
      {"spectrum", run_spectrum},     {"superclasses", run_superclasses},
      {"words", run_words},           {"compare", run_compare},
      {"verify", run_verify}};
  std::map<std::string, CLI::App*> subs;

  subs["tv-curve"] = app.add_subcommand(
      "tv-curve", "Distance to uniform against the step count");
  subs["bound-curve"] =
      app.add_subcommand("bound-curve", "Upper bounds against the step count");
  subs["spectrum"] =
      app.add_subcommand("spectrum", "Transition matrix eigenvalues");
  subs["superclasses"] = app.add_subcommand(
      "superclasses", "Label enumeration with degree statistics");
  subs["words"] =
      app.add_subcommand("words", "Generator words for class elements");
  subs["compare"] =
      app.add_subcommand("compare", "Path-comparison constant and certificate");
  subs["verify"] = app.add_subcommand("verify", "Run the invariant suite");

  for (auto& [name, sub] : subs) add_common(sub, opts[name]);
  subs["bound-curve"]
      ->add_option("--bound", opts["bound-curve"].bound_kind,
                   "Which bound to tabulate")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->check(CLI::IsMember({"fourier", "main", "both"}));

  try {
    std::vector<std::string> args =
        expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return runners[name](opts[name]);
    return 1;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant: " << e.what() << "\n";
    return 3;
  }
}
