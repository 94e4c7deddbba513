#include "heights/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include "heights/error.hpp"

namespace heights {

namespace {

using i128 = __int128;

constexpr std::int64_t kMaxEnumerationBound = std::int64_t{1} << 31;
constexpr std::int64_t kMaxSieveBound = 200'000'000;

struct CompiledTerm {
  std::int64_t small = 0;
  BigInt big;
  std::vector<std::pair<unsigned, unsigned>> factors;  // (variable, exponent)
};

// Polynomial specialised to a box [-B, B]^{n+1}; `bound` dominates |value|.
struct CompiledPoly {
  std::vector<CompiledTerm> terms;
  BigInt bound = 0;
  bool fits_small = true;
};

CompiledPoly compile(const std::vector<const Term*>& terms, std::int64_t B, int skip_var) {
  CompiledPoly out;
  for (const Term* t : terms) {
    CompiledTerm ct;
    ct.big = t->coeff;
    out.fits_small = out.fits_small && t->coeff.fits_slong_p();
    ct.small = out.fits_small ? t->coeff.get_si() : 0;
    unsigned deg = 0;
    for (unsigned v = 0; v < t->exponents.size(); ++v) {
      if (static_cast<int>(v) == skip_var || t->exponents[v] == 0) continue;
      ct.factors.emplace_back(v, t->exponents[v]);
      deg += t->exponents[v];
    }
    BigInt term_bound;
    mpz_pow_ui(term_bound.get_mpz_t(), BigInt(static_cast<long>(B)).get_mpz_t(), deg);
    out.bound += ::abs(t->coeff) * term_bound;
    out.terms.push_back(std::move(ct));
  }
  return out;
}

CompiledPoly compile(const Polynomial& p, std::int64_t B) {
  std::vector<const Term*> terms;
  for (const auto& t : p.terms()) terms.push_back(&t);
  return compile(terms, B, -1);
}

struct Plan {
  std::size_t width = 0;
  int solve_var = -1;
  std::vector<CompiledPoly> solve_coeffs;  // coefficient of x_j^k, k = 0..deg
  std::vector<CompiledPoly> checks;
  std::vector<std::vector<CompiledPoly>> excluded;
  std::vector<std::size_t> looped;
  bool fast = true;
  bool empty = false;
};

Plan make_plan(const VarietySpec& spec, std::int64_t B) {
  Plan plan;
  plan.width = spec.n + 1;
  for (const auto& p : spec.polys) {
    if (p.num_vars() != plan.width) throw InvalidArgument("polynomial arity does not match n + 1");
    if (p.is_constant()) plan.empty = true;
  }

  // Prefer a variable of degree 1 whose leading coefficient is a nonzero
  // constant, then any degree-1 variable, then degree 2; among equals the
  // highest index, which lets the sign rule prune more of the loops.
  int best_poly = -1, best_var = -1;
  std::tuple<int, int, int> best_score{-1, -1, -1};
  for (std::size_t pi = 0; pi < spec.polys.size(); ++pi) {
    const auto& p = spec.polys[pi];
    for (std::size_t v = 0; v < plan.width; ++v) {
      const unsigned d = p.degree_in(v);
      if (d == 0 || d > 2) continue;
      bool constant_lead = true;
      for (const auto& t : p.terms()) {
        if (t.exponents[v] == d && t.exponents[v] != p.degree()) constant_lead = false;
      }
      std::tuple<int, int, int> score{d == 1 ? 1 : 0, constant_lead ? 1 : 0, static_cast<int>(v)};
      if (score > best_score) {
        best_score = score;
        best_poly = static_cast<int>(pi);
        best_var = static_cast<int>(v);
      }
    }
  }

  const BigInt limit = BigInt(1) << 125;
  auto note = [&](const CompiledPoly& c) {
    if (!c.fits_small || c.bound >= limit) plan.fast = false;
  };

  for (std::size_t pi = 0; pi < spec.polys.size(); ++pi) {
    if (static_cast<int>(pi) == best_poly) continue;
    plan.checks.push_back(compile(spec.polys[pi], B));
    note(plan.checks.back());
  }
  for (const auto& sys : spec.excluded) {
    std::vector<CompiledPoly> compiled;
    for (const auto& p : sys) {
      if (p.num_vars() != plan.width) throw InvalidArgument("polynomial arity does not match n + 1");
      compiled.push_back(compile(p, B));
      note(compiled.back());
    }
    plan.excluded.push_back(std::move(compiled));
  }

  if (best_poly >= 0) {
    plan.solve_var = best_var;
    const auto& p = spec.polys[best_poly];
    const unsigned d = p.degree_in(best_var);
    for (unsigned k = 0; k <= d; ++k) {
      std::vector<const Term*> part;
      for (const auto& t : p.terms()) {
        if (t.exponents[best_var] == k) part.push_back(&t);
      }
      plan.solve_coeffs.push_back(compile(part, B, best_var));
      note(plan.solve_coeffs.back());
    }
    if (d == 2) {
      const auto& c = plan.solve_coeffs;
      if (c[1].bound * c[1].bound + 4 * c[2].bound * c[0].bound >= limit) plan.fast = false;
    }
  }

  for (std::size_t v = 0; v < plan.width; ++v) {
    if (static_cast<int>(v) != plan.solve_var) plan.looped.push_back(v);
  }
  return plan;
}

template <class Int>
Int coefficient(const CompiledTerm& t);
template <>
i128 coefficient<i128>(const CompiledTerm& t) {
  return t.small;
}
template <>
BigInt coefficient<BigInt>(const CompiledTerm& t) {
  return t.big;
}

template <class Int>
Int evaluate(const CompiledPoly& p, const std::int64_t* x) {
  Int sum = 0;
  for (const auto& t : p.terms) {
    Int m = coefficient<Int>(t);
    for (const auto& [v, e] : t.factors) {
      for (unsigned k = 0; k < e; ++k) m *= static_cast<long>(x[v]);
    }
    sum += m;
  }
  return sum;
}

bool fits_bound(i128 v, std::int64_t B, std::int64_t& out) {
  if (v < -B || v > B) return false;
  out = static_cast<std::int64_t>(v);
  return true;
}
bool fits_bound(const BigInt& v, std::int64_t B, std::int64_t& out) {
  if (v < -B || v > B) return false;
  out = v.get_si();
  return true;
}

bool exact_div(i128 a, i128 b, i128& q) {
  q = a / b;
  return q * b == a;
}
bool exact_div(const BigInt& a, const BigInt& b, BigInt& q) {
  if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return false;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return true;
}

bool exact_sqrt(i128 d, i128& r) {
  if (d < 0) return false;
  r = static_cast<i128>(std::sqrt(static_cast<long double>(d)));
  while (r > 0 && r * r > d) --r;
  while ((r + 1) * (r + 1) <= d) ++r;
  return r * r == d;
}
bool exact_sqrt(const BigInt& d, BigInt& r) {
  if (sgn(d) < 0 || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_sqrt(r.get_mpz_t(), d.get_mpz_t());
  return true;
}

// Walks every candidate of one outer slab and hands accepted points to the
// sink as (coords, height).
template <class Int, class Sink>
class Scanner {
 public:
  Scanner(const Plan& plan, std::int64_t B, Sink& sink)
      : plan_(plan), B_(B), sink_(sink), x_(plan.width, 0) {}

  void run_outer(std::int64_t value) {
    x_[plan_.looped[0]] = value;
    recurse(1, value == 0);
  }

 private:
  bool can_prune(std::size_t level, bool prefix_zero) const {
    return prefix_zero && (plan_.solve_var < 0 || plan_.looped[level] < static_cast<std::size_t>(plan_.solve_var));
  }

  void recurse(std::size_t level, bool prefix_zero) {
    if (level == plan_.looped.size()) {
      finish();
      return;
    }
    const std::size_t k = plan_.looped[level];
    const std::int64_t lo = can_prune(level, prefix_zero) ? 0 : -B_;
    if (level + 1 == plan_.looped.size()) {
      for (std::int64_t v = lo; v <= B_; ++v) {
        x_[k] = v;
        finish();
      }
    } else {
      for (std::int64_t v = lo; v <= B_; ++v) {
        x_[k] = v;
        recurse(level + 1, prefix_zero && v == 0);
      }
    }
  }

  void finish() {
    if (plan_.solve_var < 0) {
      candidate();
      return;
    }
    const auto j = static_cast<std::size_t>(plan_.solve_var);
    const auto& cs = plan_.solve_coeffs;
    const Int c0 = evaluate<Int>(cs[0], x_.data());
    const Int c1 = evaluate<Int>(cs[1], x_.data());
    const Int c2 = cs.size() > 2 ? evaluate<Int>(cs[2], x_.data()) : Int(0);
    if (c2 == 0) {
      if (c1 == 0) {
        if (c0 != 0) return;
        for (std::int64_t v = -B_; v <= B_; ++v) {
          x_[j] = v;
          candidate();
        }
        return;
      }
      Int q;
      if (!exact_div(Int(-c0), c1, q)) return;
      if (fits_bound(q, B_, x_[j])) candidate();
      return;
    }
    const Int disc = c1 * c1 - Int(4) * c2 * c0;
    Int r;
    if (!exact_sqrt(disc, r)) return;
    const Int den = Int(2) * c2;
    Int q;
    if (exact_div(Int(-c1 + r), den, q) && fits_bound(q, B_, x_[j])) candidate();
    if (r != 0 && exact_div(Int(-c1 - r), den, q) && fits_bound(q, B_, x_[j])) candidate();
  }

  void candidate() {
    std::int64_t g = 0, h = 0;
    int lead = 0;
    for (auto v : x_) {
      if (lead == 0 && v != 0) lead = v > 0 ? 1 : -1;
      const std::int64_t a = v < 0 ? -v : v;
      g = std::gcd(g, a);
      h = std::max(h, a);
    }
    if (lead <= 0 || g != 1) return;
    for (const auto& p : plan_.checks) {
      if (evaluate<Int>(p, x_.data()) != 0) return;
    }
    for (const auto& sys : plan_.excluded) {
      bool all_vanish = true;
      for (const auto& p : sys) {
        if (evaluate<Int>(p, x_.data()) != 0) {
          all_vanish = false;
          break;
        }
      }
      if (all_vanish) return;
    }
    sink_(x_, h);
  }

  const Plan& plan_;
  std::int64_t B_;
  Sink& sink_;
  std::vector<std::int64_t> x_;
};

// Runs one sink per worker over the outer-slab values; the caller merges the
// sinks, so results do not depend on how slabs were distributed.
template <class Sink>
std::vector<Sink> scan(const Plan& plan, std::int64_t B, unsigned threads, const std::function<Sink()>& make) {
  threads = resolve_threads(threads);
  const bool prune_outer = plan.solve_var < 0 || plan.looped[0] < static_cast<std::size_t>(plan.solve_var);
  const std::int64_t lo = prune_outer ? 0 : -B;
  const auto slabs = static_cast<std::uint64_t>(B - lo + 1);
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, slabs));
  std::vector<Sink> sinks;
  for (unsigned w = 0; w < workers; ++w) sinks.push_back(make());
  std::atomic<std::int64_t> next{lo};
  auto work = [&](Sink& sink) {
    if (plan.fast) {
      Scanner<i128, Sink> s(plan, B, sink);
      for (std::int64_t v; (v = next.fetch_add(1)) <= B;) s.run_outer(v);
    } else {
      Scanner<BigInt, Sink> s(plan, B, sink);
      for (std::int64_t v; (v = next.fetch_add(1)) <= B;) s.run_outer(v);
    }
  };
  if (workers <= 1) {
    if (!sinks.empty()) work(sinks[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, std::ref(sinks[w]));
    for (auto& t : pool) t.join();
  }
  return sinks;
}

void check_bound(std::int64_t B) {
  if (B < 1) throw InvalidArgument("height bound must be >= 1");
  if (B > kMaxEnumerationBound) throw ResourceError("height bound too large to enumerate");
}

struct HistogramSink {
  std::vector<std::uint64_t> hist;
  void operator()(const std::vector<std::int64_t>&, std::int64_t h) { ++hist[h]; }
};

struct PointSink {
  std::vector<std::int64_t> coords;
  void operator()(const std::vector<std::int64_t>& x, std::int64_t) {
    coords.insert(coords.end(), x.begin(), x.end());
  }
};

BigInt power(long base, unsigned e) {
  BigInt r;
  const BigInt b(base);
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

}  // namespace

CountSeries::CountSeries(std::vector<std::pair<std::int64_t, BigInt>> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first < 1) throw InvalidArgument("count series bounds must be positive");
    if (entries_[i].second < 0) throw InvalidArgument("count series counts must be nonnegative");
    if (i > 0) {
      if (entries_[i].first <= entries_[i - 1].first)
        throw InvalidArgument("count series bounds must be strictly increasing");
      if (entries_[i].second < entries_[i - 1].second)
        throw InvalidArgument("count series counts must be nondecreasing");
    }
  }
}

std::string CountSeries::to_csv() const {
  std::string out = "B,N\n";
  for (const auto& [b, n] : entries_) out += std::to_string(b) + "," + n.get_str() + "\n";
  return out;
}

CountSeries CountSeries::from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::vector<std::pair<std::int64_t, BigInt>> entries;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "B,N") throw InvalidArgument("count series CSV must start with header \"B,N\"");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected \"B,N\"");
    try {
      std::size_t used = 0;
      const std::string bs = line.substr(0, comma);
      const long long b = std::stoll(bs, &used);
      if (used != bs.size()) throw std::invalid_argument(bs);
      entries.emplace_back(b, BigInt(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": malformed row '" + line + "'");
    }
  }
  if (!header) throw InvalidArgument("count series CSV is empty");
  return CountSeries(std::move(entries));
}

unsigned resolve_threads(unsigned threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

BigInt count_projective(unsigned n, std::int64_t B) {
  if (n < 1) throw InvalidArgument("count_projective needs n >= 1");
  if (B < 1) throw InvalidArgument("height bound must be >= 1");
  if (B > kMaxSieveBound) throw ResourceError("height bound too large for the Mobius sieve");
  const auto mu = mobius_sieve(B);
  std::vector<std::int64_t> mertens(mu.size(), 0);
  for (std::size_t k = 1; k < mu.size(); ++k) mertens[k] = mertens[k - 1] + mu[k];
  BigInt total = 0;
  // floor(B/k) takes O(sqrt B) distinct values; group k by it.
  for (std::int64_t k = 1; k <= B;) {
    const std::int64_t q = B / k;
    const std::int64_t k_end = B / q;
    const std::int64_t weight = mertens[k_end] - mertens[k - 1];
    if (weight != 0) total += BigInt(static_cast<long>(weight)) * (power(2 * q + 1, n + 1) - 1);
    k = k_end + 1;
  }
  return total / 2;
}

std::vector<BigInt> projective_height_histogram(unsigned n, std::int64_t B) {
  if (n < 1) throw InvalidArgument("projective space needs n >= 1");
  if (B < 1) throw InvalidArgument("height bound must be >= 1");
  if (B > kMaxSieveBound) throw ResourceError("height bound too large for the Mobius sieve");
  // Nonzero integer vectors with max |x_i| = m, then Mobius over the gcd.
  std::vector<BigInt> shell(static_cast<std::size_t>(B) + 1, 0);
  for (std::int64_t m = 1; m <= B; ++m) shell[m] = power(2 * m + 1, n + 1) - power(2 * m - 1, n + 1);
  const auto mu = mobius_sieve(B);
  std::vector<BigInt> hist(static_cast<std::size_t>(B) + 1, 0);
  for (std::int64_t k = 1; k <= B; ++k) {
    if (mu[k] == 0) continue;
    for (std::int64_t m = 1; m * k <= B; ++m) {
      if (mu[k] > 0) {
        hist[m * k] += shell[m];
      } else {
        hist[m * k] -= shell[m];
      }
    }
  }
  for (auto& h : hist) h /= 2;
  return hist;
}

PointList enumerate_raw(const VarietySpec& spec, std::int64_t B, unsigned threads) {
  check_bound(B);
  const Plan plan = make_plan(spec, B);
  PointList out;
  out.width = plan.width;
  if (plan.empty) return out;
  auto sinks = scan<PointSink>(plan, B, threads, [] { return PointSink{}; });
  std::vector<std::int64_t> all;
  for (auto& s : sinks) all.insert(all.end(), s.coords.begin(), s.coords.end());
  const std::size_t w = plan.width;
  const std::size_t count = all.size() / w;
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(all.begin() + a * w, all.begin() + (a + 1) * w, all.begin() + b * w,
                                        all.begin() + (b + 1) * w);
  });
  out.coords.reserve(all.size());
  for (auto i : order) out.coords.insert(out.coords.end(), all.begin() + i * w, all.begin() + (i + 1) * w);
  return out;
}

std::vector<PrimitivePoint> enumerate_points(const VarietySpec& spec, std::int64_t B, unsigned threads) {
  const PointList list = enumerate_raw(spec, B, threads);
  std::vector<PrimitivePoint> out;
  out.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(PrimitivePoint::from_int64(list[i]));
  return out;
}

void for_each_point(const VarietySpec& spec, std::int64_t B,
                    const std::function<void(std::span<const std::int64_t>, std::int64_t)>& visit) {
  check_bound(B);
  const Plan plan = make_plan(spec, B);
  if (plan.empty) return;
  struct ForwardSink {
    const std::function<void(std::span<const std::int64_t>, std::int64_t)>& f;
    void operator()(const std::vector<std::int64_t>& x, std::int64_t h) { f(x, h); }
  };
  scan<ForwardSink>(plan, B, 1, [&visit] { return ForwardSink{visit}; });
}

std::vector<BigInt> height_histogram(const VarietySpec& spec, std::int64_t B, unsigned threads) {
  if (spec.is_full_projective_space()) return projective_height_histogram(spec.n, B);
  check_bound(B);
  const Plan plan = make_plan(spec, B);
  std::vector<BigInt> out(static_cast<std::size_t>(B) + 1, 0);
  if (plan.empty) return out;
  const auto size = static_cast<std::size_t>(B) + 1;
  auto sinks = scan<HistogramSink>(plan, B, threads, [size] { return HistogramSink{std::vector<std::uint64_t>(size, 0)}; });
  std::vector<std::uint64_t> total(size, 0);
  for (const auto& s : sinks) {
    for (std::size_t h = 0; h < size; ++h) total[h] += s.hist[h];
  }
  for (std::size_t h = 0; h < size; ++h) out[h] = BigInt(std::to_string(total[h]));
  return out;
}

CountSeries count_series(const VarietySpec& spec, std::span<const std::int64_t> bounds, unsigned threads) {
  if (bounds.empty()) return CountSeries{};
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i] < 1) throw InvalidArgument("height bounds must be >= 1");
    if (i > 0 && bounds[i] <= bounds[i - 1]) throw InvalidArgument("height bounds must be strictly increasing");
  }
  const auto hist = height_histogram(spec, bounds.back(), threads);
  std::vector<std::pair<std::int64_t, BigInt>> entries;
  BigInt running = 0;
  std::size_t next = 0;
  for (std::int64_t h = 0; h <= bounds.back(); ++h) {
    running += hist[h];
    if (h == bounds[next]) {
      entries.emplace_back(h, running);
      ++next;
    }
  }
  return CountSeries(std::move(entries));
}

Norm parse_norm(std::string_view name) {
  if (name == "euclidean" || name == "l2") return Norm::kEuclidean;
  if (name == "sup" || name == "max") return Norm::kSup;
  throw InvalidArgument("unknown norm '" + std::string(name) + "' (expected euclidean or sup)");
}

namespace {

std::int64_t isqrt64(std::int64_t m) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(m)));
  while (r > 0 && r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  return r;
}

// #{x in Z^dims : sum x_i^2 <= m}
BigInt ball_count(unsigned dims, std::int64_t m) {
  if (m < 0) return 0;
  if (dims == 0) return 1;
  const std::int64_t r = isqrt64(m);
  if (dims == 1) return BigInt(static_cast<long>(2 * r + 1));
  if (dims == 2) {
    std::uint64_t total = 0;
    for (std::int64_t x = -r; x <= r; ++x) total += static_cast<std::uint64_t>(2 * isqrt64(m - x * x) + 1);
    return BigInt(std::to_string(total));
  }
  BigInt total = ball_count(dims - 1, m);
  for (std::int64_t x = 1; x <= r; ++x) total += 2 * ball_count(dims - 1, m - x * x);
  return total;
}

}  // namespace

BigInt circle_count(unsigned n, const Rational& B, Norm norm) {
  if (B.sign() < 0) throw InvalidArgument("circle_count needs B >= 0");
  if (n == 0) return 1;
  if (norm == Norm::kSup) {
    BigInt f;
    mpz_fdiv_q(f.get_mpz_t(), B.num().get_mpz_t(), B.den().get_mpz_t());
    BigInt side = 2 * f + 1, out;
    mpz_pow_ui(out.get_mpz_t(), side.get_mpz_t(), n);
    return out;
  }
  // sum x_i^2 is an integer, so sum x_i^2 <= B^2 iff it is <= floor(B^2).
  const Rational sq = B * B;
  BigInt m;
  mpz_fdiv_q(m.get_mpz_t(), sq.num().get_mpz_t(), sq.den().get_mpz_t());
  if (m > BigInt(std::int64_t{1} << 62)) throw ResourceError("radius too large for exact lattice counting");
  return ball_count(n, m.get_si());
}

BigInt circle_count(unsigned n, double B, Norm norm) {
  if (!std::isfinite(B)) throw InvalidArgument("circle_count needs a finite radius");
  mpq_class exact(B);
  return circle_count(n, Rational(exact.get_num(), exact.get_den()), norm);
}

}  // namespace heights
