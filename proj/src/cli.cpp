#include "heights/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "heights/enumerate.hpp"
#include "heights/error.hpp"
#include "heights/heights.hpp"
#include "heights/igusa.hpp"
#include "heights/zeta.hpp"
#include "json.hpp"

namespace heights::cli {

namespace {

using nlohmann::json;

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; report the line and column of that byte.
    const std::size_t upto = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidArgument(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": malformed JSON: " + e.what());
  }
}

json read_json(const std::string& path) { return parse_json(read_input(path), path); }

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& s : split(text)) out.push_back(parse_int(s));
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

// "2", "-0.5", "1.5+2i", "1.5-2.25i", "3i".
std::complex<double> parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw InvalidArgument("empty complex number");
  if (s.back() != 'i') return parse_double(s);
  s.pop_back();
  std::size_t split_at = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  if (split_at == std::string::npos) return {0.0, imag(s)};
  return {parse_double(s.substr(0, split_at)), imag(s.substr(split_at))};
}

// Exact decimal or fraction: "10", "2.5", "-1.25", "5/2".
Rational parse_exact(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) return Rational::parse(s);
  const std::string frac = s.substr(dot + 1);
  if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidArgument("not a decimal number: '" + s + "'");
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
  const std::string whole = s.substr(0, dot);
  const bool neg = !whole.empty() && whole[0] == '-';
  const std::string digits = (whole.empty() || whole == "-" || whole == "+") ? "0" : whole;
  Rational r = Rational::parse(digits).abs() + Rational(BigInt(frac), scale);
  return neg ? -r : r;
}

std::string num(double v) { return json(v).dump(); }

json bigint_json(const BigInt& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

struct SpecSource {
  std::optional<unsigned> pn;
  std::string path;

  void add(CLI::App* sub) {
    auto* a = sub->add_option("--pn", pn, "use projective space P^n");
    auto* b = sub->add_option("--spec", path, "variety spec JSON file");
    a->excludes(b);
  }

  VarietySpec load() const {
    if (pn) return VarietySpec::projective_space(*pn);
    if (path.empty()) throw InvalidArgument("give --pn or --spec");
    return VarietySpec::from_json(read_json(path));
  }
};

struct Options {
  unsigned threads = 0;
  bool progress = false;

  std::string point, metric = "max";
  std::optional<std::size_t> section;

  SpecSource spec;
  std::string bounds, s_values, format = "csv", norm = "euclidean", radius;
  unsigned circle_n = 2;

  std::string series_path, t_values = "1,2,3,4";
  bool abscissa = false;

  std::string datum_path;
  std::int64_t q = 0;
  std::int64_t cutoff = 100000;
  std::string volume_bounds;
  std::string product_s;

  std::string bad;
};

void cmd_height(const Options& o, std::ostream& out) {
  std::vector<Rational> raw;
  for (const auto& s : split(o.point)) raw.push_back(parse_exact(s));
  const auto x = normalize(std::span<const Rational>(raw));
  const auto metric = parse_metric(o.metric);
  const auto h = height(x, metric);
  json j = json::parse(h.to_json());
  j["point"] = json::array();
  for (const auto& c : x.coords()) j["point"].push_back(bigint_json(c));
  j["metric"] = metric == MetricKind::kMax ? "max" : "fs";

  std::size_t section = 0;
  if (o.section) {
    section = *o.section;
  } else {
    for (std::size_t i = 1; i < x.size(); ++i)
      if (::abs(x[i]) > ::abs(x[section])) section = i;
  }
  j["section"] = section;
  j["local_factors"] = json::array();
  for (const auto& place : relevant_places(x)) {
    const auto f = local_height_factor(x, section, place, metric);
    json entry{{"place", place.is_archimedean() ? json("inf") : json(place.prime())}, {"value", f.value}};
    if (f.exact) entry["exact"] = f.exact->to_string();
    j["local_factors"].push_back(entry);
  }
  out << j.dump() << "\n";
}

void cmd_count(const Options& o, std::ostream& out, std::ostream& err) {
  const auto spec = o.spec.load();
  const auto bounds = parse_int_list(o.bounds);
  const auto start = std::chrono::steady_clock::now();
  if (o.progress) err << "counting up to B=" << bounds.back() << "\n";
  const auto series = count_series(spec, bounds, o.threads);
  if (o.progress) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    err << "done in " << dt.count() << " s\n";
  }
  out << series.to_csv();
}

void cmd_enumerate(const Options& o, std::ostream& out) {
  const auto spec = o.spec.load();
  const auto bounds = parse_int_list(o.bounds);
  if (bounds.size() != 1) throw InvalidArgument("enumerate takes a single --B");
  const auto points = enumerate_raw(spec, bounds[0], o.threads);
  auto height_of = [](std::span<const std::int64_t> p) {
    std::int64_t h = 0;
    for (auto v : p) h = std::max(h, v < 0 ? -v : v);
    return h;
  };
  if (o.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) arr.push_back(std::vector<std::int64_t>(points[i].begin(), points[i].end()));
    out << arr.dump() << "\n";
    return;
  }
  if (o.format != "csv") throw InvalidArgument("--format must be csv or json");
  for (std::size_t k = 0; k < points.width; ++k) out << 'x' << k << ',';
  out << "H\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (auto v : points[i]) out << v << ',';
    out << height_of(points[i]) << '\n';
  }
}

void cmd_circle(const Options& o, std::ostream& out) {
  out << circle_count(o.circle_n, parse_exact(o.radius), parse_norm(o.norm)).get_str() << "\n";
}

void cmd_zeta(const Options& o, std::ostream& out) {
  const auto spec = o.spec.load();
  const auto bounds = parse_int_list(o.bounds);
  std::vector<std::complex<double>> grid;
  for (const auto& s : split(o.s_values)) grid.push_back(parse_complex(s));
  const auto sums = zeta_partial_sums(spec, grid, bounds, o.threads);
  const bool single = grid.size() == 1;
  out << (single ? "B,re,im\n" : "s_re,s_im,B,re,im\n");
  for (const auto& z : sums) {
    if (!single) out << num(z.s.real()) << ',' << num(z.s.imag()) << ',';
    out << z.B << ',' << num(z.value.real()) << ',' << num(z.value.imag()) << '\n';
  }
}

void cmd_fit(const Options& o, std::ostream& out) {
  const auto series = CountSeries::from_csv(read_input(o.series_path));
  if (o.abscissa) {
    const auto est = abscissa_estimate(series);
    out << json{{"slope", est.slope}, {"ratio", est.ratio}}.dump() << "\n";
    return;
  }
  std::vector<int> ts;
  for (auto t : parse_int_list(o.t_values)) ts.push_back(static_cast<int>(t));
  out << fit_asymptotic(series, ts).to_json() << "\n";
}

NCDatum load_datum(const std::string& path) { return NCDatum::from_json(read_json(path)); }

void cmd_igusa_local(const Options& o, std::ostream& out) {
  const auto datum = load_datum(o.datum_path);
  const auto s = parse_complex(o.s_values);
  const auto v = denef_local_zeta(datum, o.q, s);
  json j{{"q", o.q}, {"s_re", s.real()}, {"s_im", s.imag()}, {"re", v.value.real()}, {"im", v.value.imag()}};
  // Exact value when s is rational and every d_a (s - 1) is an integer.
  if (s.imag() == 0.0) {
    try {
      j["exact"] = denef_local_zeta_exact(datum, o.q, parse_exact(o.s_values)).to_string();
    } catch (const InvalidArgument&) {
    }
  }
  out << j.dump() << "\n";
}

void cmd_igusa_global(const Options& o, std::ostream& out) {
  const auto datum = load_datum(o.datum_path);
  const auto lc = leading_constant(datum, o.cutoff, o.threads);
  json j = lc.to_json();
  if (!o.volume_bounds.empty()) {
    j["volume"] = json::array();
    for (const auto& b : split(o.volume_bounds)) {
      const double B = parse_double(b);
      j["volume"].push_back({{"B", B}, {"V", volume_prediction(lc.value, lc.pole_order, B)}});
    }
  }
  if (!o.product_s.empty()) {
    const auto r = regularized_euler_product(datum, parse_complex(o.product_s), o.cutoff, o.threads);
    json p{{"s_re", r.s.real()},
           {"s_im", r.s.imag()},
           {"pole_order", r.pole_order},
           {"regular_part", {r.regular_part.real(), r.regular_part.imag()}}};
    p["assembled"] = r.assembled ? json{r.assembled->real(), r.assembled->imag()} : json(nullptr);
    if (r.leading) p["leading"] = *r.leading;
    j["product"] = p;
  }
  out << j.dump() << "\n";
}

void cmd_strata(const Options& o, std::ostream& out) {
  const json j = read_json(o.spec.path);
  const auto spec = VarietySpec::from_json(j);
  std::vector<Polynomial> boundary;
  if (j.contains("boundary")) boundary = polys_from_json(j.at("boundary"), spec.n + 1);
  // Reuse the datum's key formatting for labels.
  NCDatum labels;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    std::string label = "b" + std::to_string(i);
    if (j.contains("labels")) label = j.at("labels").at(i).get<std::string>();
    labels.components.push_back({label, 1});
  }
  std::set<std::int64_t> bad = default_bad_primes(spec, boundary);
  if (!o.bad.empty())
    for (auto p : parse_int_list(o.bad)) bad.insert(p);
  const auto counts = count_strata_ff(spec, boundary, o.q, bad);
  json strata = json::object();
  for (const auto& [m, c] : counts) strata[labels.key(m)] = bigint_json(c);
  out << json{{"p", o.q}, {"strata", strata}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heights of rational points, point counts, height zeta functions and Igusa integrals"};
  app.require_subcommand(1, 1);
  Options o;

  auto threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)")->envname("HEIGHTS_THREADS");
  };

  auto* height = app.add_subcommand("height", "height and local factors of a point");
  height->add_option("--point", o.point, "comma-separated coordinates (integers, a/b or decimals)")->required();
  height->add_option("--metric", o.metric, "max or fs");
  height->add_option("--section", o.section, "coordinate section for the local factors");

  auto* count = app.add_subcommand("count", "N(B) for a list of bounds, as CSV");
  o.spec.add(count);
  count->add_option("--B", o.bounds, "comma-separated increasing bounds")->required();
  count->add_flag("--progress", o.progress, "report progress on stderr");
  threads(count);

  auto* enumerate = app.add_subcommand("enumerate", "points of height <= B");
  o.spec.add(enumerate);
  enumerate->add_option("--B", o.bounds, "height bound")->required();
  enumerate->add_option("--format", o.format, "csv or json");
  threads(enumerate);

  auto* circle = app.add_subcommand("circle", "lattice points in a ball");
  circle->add_option("--n", o.circle_n, "dimension");
  circle->add_option("--B", o.radius, "radius (integer, a/b or decimal)")->required();
  circle->add_option("--norm", o.norm, "euclidean or sup");

  auto* zeta = app.add_subcommand("zeta", "height zeta partial sums, as CSV");
  o.spec.add(zeta);
  zeta->add_option("--s", o.s_values, "comma-separated values of s, e.g. 2,1.5+3i")->required();
  zeta->add_option("--B", o.bounds, "comma-separated increasing bounds")->required();
  threads(zeta);

  auto* fit = app.add_subcommand("fit", "fit c B^a (log B)^(t-1) to a B,N CSV");
  fit->add_option("--series", o.series_path, "CSV file, - for stdin")->required();
  fit->add_option("--t", o.t_values, "candidate log powers");
  fit->add_flag("--abscissa", o.abscissa, "print the growth exponent estimates instead");

  auto* local = app.add_subcommand("igusa-local", "Denef local zeta value");
  local->add_option("--datum", o.datum_path, "normal-crossings datum JSON")->required();
  local->add_option("--q", o.q, "prime")->required();
  local->add_option("--s", o.s_values, "s, real or complex")->required();

  auto* global = app.add_subcommand("igusa-global", "leading constant and volume prediction");
  global->add_option("--datum", o.datum_path, "normal-crossings datum JSON")->required();
  global->add_option("--cutoff", o.cutoff, "largest prime in the Euler product");
  global->add_option("--B", o.volume_bounds, "bounds for the volume prediction");
  global->add_option("--s", o.product_s, "also evaluate the regularized product at s");
  threads(global);

  auto* strata = app.add_subcommand("strata", "stratum counts over F_p");
  strata->add_option("--spec", o.spec.path, "spec JSON with optional boundary and labels")->required();
  strata->add_option("--p", o.q, "prime")->required();
  strata->add_option("--bad", o.bad, "extra bad primes");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*height) cmd_height(o, out);
    else if (*count) cmd_count(o, out, err);
    else if (*enumerate) cmd_enumerate(o, out);
    else if (*circle) cmd_circle(o, out);
    else if (*zeta) cmd_zeta(o, out);
    else if (*fit) cmd_fit(o, out);
    else if (*local) cmd_igusa_local(o, out);
    else if (*global) cmd_igusa_global(o, out);
    else if (*strata) cmd_strata(o, out);
  } catch (const PoleError& e) {
    err << "error: " << e.what() << " (component " << e.component() << ")\n";
    return kExitResource;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    // DataError, InsufficientData, SectionVanishes
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace heights::cli
