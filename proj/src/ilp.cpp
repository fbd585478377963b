#include "ilpminer/ilp.hpp"

#include <algorithm>
#include <climits>
#include <compare>
#include <optional>

#include "ilpminer/error.hpp"

namespace ilpminer {
namespace {

struct Overflow {};

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Exact rational with 64-bit parts. Any result that does not fit throws
// Overflow and the caller retries with arbitrary precision.
class Rat64 {
 public:
  Rat64() = default;
  Rat64(std::int64_t v) : n_(v) {}  // NOLINT(google-explicit-constructor)

  static Rat64 make(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) return {};
    if (d != 1) {
      const i128 g = gcd128(n, d);
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX) throw Overflow{};
    Rat64 r;
    r.n_ = static_cast<std::int64_t>(n);
    r.d_ = static_cast<std::int64_t>(d);
    return r;
  }

  friend Rat64 operator+(const Rat64& a, const Rat64& b) {
    if (a.d_ == 1 && b.d_ == 1) return make(i128(a.n_) + b.n_, 1);
    return make(i128(a.n_) * b.d_ + i128(b.n_) * a.d_, i128(a.d_) * b.d_);
  }
  friend Rat64 operator-(const Rat64& a, const Rat64& b) {
    if (a.d_ == 1 && b.d_ == 1) return make(i128(a.n_) - b.n_, 1);
    return make(i128(a.n_) * b.d_ - i128(b.n_) * a.d_, i128(a.d_) * b.d_);
  }
  friend Rat64 operator*(const Rat64& a, const Rat64& b) {
    return make(i128(a.n_) * b.n_, i128(a.d_) * b.d_);
  }
  friend Rat64 operator/(const Rat64& a, const Rat64& b) {
    if (b.n_ == 0) throw Error("division by zero in simplex");
    return make(i128(a.n_) * b.d_, i128(a.d_) * b.n_);
  }
  Rat64 operator-() const {
    Rat64 r = *this;
    r.n_ = -r.n_;
    return r;
  }
  Rat64& operator+=(const Rat64& o) { return *this = *this + o; }
  Rat64& operator-=(const Rat64& o) { return *this = *this - o; }
  Rat64& operator/=(const Rat64& o) { return *this = *this / o; }

  friend bool operator==(const Rat64& a, const Rat64& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  friend std::strong_ordering operator<=>(const Rat64& a, const Rat64& b) {
    return i128(a.n_) * b.d_ <=> i128(b.n_) * a.d_;
  }

  int sign() const { return (n_ > 0) - (n_ < 0); }
  bool integral() const { return d_ == 1; }
  mpq_class to_mpq() const { return mpq_class(mpz_class(n_), mpz_class(d_)); }

 private:
  std::int64_t n_ = 0;
  std::int64_t d_ = 1;
};

int sign_of(const Rat64& r) { return r.sign(); }
int sign_of(const mpq_class& q) { return sgn(q); }
bool is_integral(const Rat64& r) { return r.integral(); }
bool is_integral(const mpq_class& q) { return q.get_den() == 1; }
mpq_class as_mpq(const Rat64& r) { return r.to_mpq(); }
mpq_class as_mpq(const mpq_class& q) { return q; }

template <class T>
T from_int(std::int64_t v) {
  if constexpr (std::is_same_v<T, mpq_class>) {
    return mpq_class(mpz_class(static_cast<long>(v)));
  } else {
    return T(v);
  }
}

template <class T>
T from_mpz(const mpz_class& z) {
  if constexpr (std::is_same_v<T, mpq_class>) {
    return mpq_class(z);
  } else {
    if (!z.fits_slong_p()) throw Overflow{};
    return T(static_cast<std::int64_t>(z.get_si()));
  }
}

template <class T>
T abs_of(const T& v) {
  return sign_of(v) < 0 ? T(-v) : v;
}

// Dense row form: rows[i] . v - s_i = rhs[i], s_i >= 0 (or == 0 for equalities).
struct Model {
  std::size_t n = 0;
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::int64_t> rhs;
  std::vector<bool> equality;
  std::vector<std::int64_t> cost;
  std::vector<std::uint8_t> lo;
  std::vector<std::uint8_t> hi;
  bool conflicting = false;
};

Model make_model(const IlpInstance& inst) {
  if (!inst.system) throw Error("ILP instance has no constraint system");
  const auto& cs = *inst.system;
  Model m;
  m.n = cs.num_variables();
  if (cs.objective.size() != m.n) throw Error("objective dimension mismatch");
  for (const auto& row : cs.inequalities) {
    if (row.coefficients.size() != m.n) throw Error("inequality row dimension mismatch");
    m.rows.push_back(row.coefficients.values());
    m.rhs.push_back(0);
    m.equality.push_back(false);
  }
  for (const auto& row : cs.equalities) {
    if (row.coefficients.size() != m.n) throw Error("equality row dimension mismatch");
    m.rows.push_back(row.coefficients);
    m.rhs.push_back(0);
    m.equality.push_back(true);
  }
  std::vector<std::int64_t> arc(m.n, 1);
  arc[VariableLayout::m()] = 0;
  m.rows.push_back(std::move(arc));
  m.rhs.push_back(1);
  m.equality.push_back(false);

  m.cost = cs.objective;
  m.lo.assign(m.n, 0);
  m.hi.assign(m.n, 1);
  for (const auto& f : inst.fixings) {
    if (f.variable >= m.n) throw Error("fixing refers to a variable outside the instance");
    if (f.value > 1) throw Error("fixing value must be binary");
    if (m.lo[f.variable] > f.value || m.hi[f.variable] < f.value) m.conflicting = true;
    m.lo[f.variable] = std::max(m.lo[f.variable], f.value);
    m.hi[f.variable] = std::min(m.hi[f.variable], f.value);
  }
  return m;
}

template <class T>
struct LpOutcome {
  bool feasible = false;
  std::vector<T> values;
  T objective{};
};

// Bounded dual simplex on the full tableau, starting from the all-slack basis
// with every structural variable at its cost-preferred bound.
template <class T>
LpOutcome<T> solve_lp(const Model& model, const std::vector<T>& cost, const std::vector<std::uint8_t>& lo,
                      const std::vector<std::uint8_t>& hi) {
  const std::size_t n = model.n;
  const std::size_t rows = model.rows.size();
  const std::size_t cols = n + rows;
  for (std::size_t j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) return {};
  }

  std::vector<std::vector<T>> tab(rows, std::vector<T>(cols));
  std::vector<T> rhs(rows);
  std::vector<T> reduced(cols);
  std::vector<std::size_t> basic(rows);
  std::vector<char> is_basic(cols, 0);
  std::vector<char> at_upper(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      if (model.rows[r][j] != 0) tab[r][j] = from_int<T>(-model.rows[r][j]);
    }
    tab[r][n + r] = from_int<T>(1);
    rhs[r] = from_int<T>(-model.rhs[r]);
    basic[r] = n + r;
    is_basic[n + r] = 1;
  }
  for (std::size_t j = 0; j < n; ++j) {
    reduced[j] = cost[j];
    at_upper[j] = sign_of(cost[j]) < 0 ? 1 : 0;
  }

  auto lower = [&](std::size_t j) { return j < n ? lo[j] : std::uint8_t{0}; };
  auto has_upper = [&](std::size_t j) { return j < n || model.equality[j - n]; };
  auto upper = [&](std::size_t j) { return j < n ? hi[j] : std::uint8_t{0}; };
  auto fixed = [&](std::size_t j) { return has_upper(j) && lower(j) == upper(j); };
  auto nonbasic_value = [&](std::size_t j) { return at_upper[j] ? upper(j) : lower(j); };

  std::vector<T> value(rows);
  std::vector<std::size_t> active;
  std::vector<std::size_t> pivot_nz;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > 200000) throw Error("simplex iteration limit exceeded");
    active.clear();
    for (std::size_t j = 0; j < cols; ++j) {
      if (!is_basic[j] && nonbasic_value(j) != 0) active.push_back(j);
    }
    // Nonbasic values are bounds, so every nonzero one equals 1.
    for (std::size_t r = 0; r < rows; ++r) {
      T v = rhs[r];
      for (const auto j : active) {
        if (sign_of(tab[r][j]) != 0) v -= tab[r][j];
      }
      value[r] = std::move(v);
    }

    // Most infeasible row first; smallest basic index once degeneracy drags on.
    const bool bland = iter >= 64;
    std::optional<std::size_t> leave;
    bool raise = false;
    T worst{};
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t b = basic[r];
      T gap{};
      bool up = false;
      if (value[r] < from_int<T>(lower(b))) {
        gap = from_int<T>(lower(b)) - value[r];
        up = true;
      } else if (has_upper(b) && value[r] > from_int<T>(upper(b))) {
        gap = value[r] - from_int<T>(upper(b));
      } else {
        continue;
      }
      const bool take = !leave || (bland ? b < basic[*leave] : (gap > worst || (gap == worst && b < basic[*leave])));
      if (take) {
        leave = r;
        raise = up;
        worst = gap;
      }
    }
    if (!leave) break;

    const std::size_t r = *leave;
    std::optional<std::size_t> enter;
    T best_ratio{};
    for (std::size_t j = 0; j < cols; ++j) {
      if (is_basic[j] || fixed(j)) continue;
      const int s = sign_of(tab[r][j]);
      if (s == 0) continue;
      // x_r = rhs_r - sum tab_rj x_j; raising x_r needs x_j moving against tab_rj.
      const bool ok = raise ? (at_upper[j] ? s > 0 : s < 0) : (at_upper[j] ? s < 0 : s > 0);
      if (!ok) continue;
      T ratio = abs_of<T>(reduced[j] / tab[r][j]);
      if (!enter || ratio < best_ratio) {
        enter = j;
        best_ratio = std::move(ratio);
      }
    }
    if (!enter) return {};

    const std::size_t j = *enter;
    const std::size_t out = basic[r];
    const T piv = tab[r][j];
    pivot_nz.clear();
    for (std::size_t k = 0; k < cols; ++k) {
      if (sign_of(tab[r][k]) != 0) {
        tab[r][k] /= piv;
        pivot_nz.push_back(k);
      }
    }
    rhs[r] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sign_of(tab[i][j]) == 0) continue;
      const T f = tab[i][j];
      for (const auto k : pivot_nz) tab[i][k] -= f * tab[r][k];
      rhs[i] -= f * rhs[r];
    }
    if (sign_of(reduced[j]) != 0) {
      const T f = reduced[j];
      for (const auto k : pivot_nz) reduced[k] -= f * tab[r][k];
    }
    is_basic[out] = 0;
    at_upper[out] = raise ? 0 : 1;
    is_basic[j] = 1;
    at_upper[j] = 0;
    basic[r] = j;
  }

  LpOutcome<T> result;
  result.feasible = true;
  result.values.assign(n, T{});
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_basic[j]) result.values[j] = from_int<T>(nonbasic_value(j));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (basic[r] < n) result.values[basic[r]] = value[r];
  }
  T obj{};
  for (std::size_t j = 0; j < n; ++j) {
    if (sign_of(result.values[j]) != 0) obj += cost[j] * result.values[j];
  }
  result.objective = obj;
  return result;
}

template <class T>
class BranchAndBound {
 public:
  BranchAndBound(const Model& model, std::vector<T> cost) : model_(model), cost_(std::move(cost)) {}

  void run() {
    auto root = solve_lp<T>(model_, cost_, model_.lo, model_.hi);
    explore(model_.lo, model_.hi, root);
  }

  const std::optional<std::vector<std::uint8_t>>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  void explore(const std::vector<std::uint8_t>& lo, const std::vector<std::uint8_t>& hi, const LpOutcome<T>& lp) {
    ++nodes_;
    if (!lp.feasible) return;
    // Distinct binary points have distinct perturbed costs, so ties cannot hide a better point.
    if (best_ && !(lp.objective < best_value_)) return;

    const T half = T(from_int<T>(1)) / from_int<T>(2);
    std::optional<std::size_t> branch;
    T closest{};
    for (std::size_t j = 0; j < model_.n; ++j) {
      if (is_integral(lp.values[j])) continue;
      T gap = abs_of<T>(lp.values[j] - half);
      if (!branch || gap < closest) {
        branch = j;
        closest = std::move(gap);
      }
    }
    if (!branch) {
      std::vector<std::uint8_t> point(model_.n);
      for (std::size_t j = 0; j < model_.n; ++j) point[j] = sign_of(lp.values[j]) > 0 ? 1 : 0;
      best_ = std::move(point);
      best_value_ = lp.objective;
      return;
    }

    auto hi0 = hi;
    hi0[*branch] = 0;
    auto lo1 = lo;
    lo1[*branch] = 1;
    const auto down = solve_lp<T>(model_, cost_, lo, hi0);
    const auto up = solve_lp<T>(model_, cost_, lo1, hi);
    const bool up_first = up.feasible && (!down.feasible || up.objective < down.objective);
    if (up_first) {
      explore(lo1, hi, up);
      explore(lo, hi0, down);
    } else {
      explore(lo, hi0, down);
      explore(lo1, hi, up);
    }
  }

  const Model& model_;
  std::vector<T> cost_;
  std::optional<std::vector<std::uint8_t>> best_;
  T best_value_{};
  std::uint64_t nodes_ = 0;
};

// c_j * 2^n + 2^(n-1-j): a strict refinement of c whose minimiser is unique
// and equal to the lexicographically smallest c-optimal point.
std::vector<mpz_class> perturbed_cost(const Model& model) {
  std::vector<mpz_class> out(model.n);
  for (std::size_t j = 0; j < model.n; ++j) {
    mpz_class c(static_cast<long>(model.cost[j]));
    mpz_class w;
    mpz_ui_pow_ui(w.get_mpz_t(), 2, model.n - 1 - j);
    out[j] = (c << static_cast<mp_bitcnt_t>(model.n)) + w;
  }
  return out;
}

template <class T>
std::vector<T> convert_cost(const std::vector<mpz_class>& cost) {
  std::vector<T> out;
  out.reserve(cost.size());
  for (const auto& c : cost) out.push_back(from_mpz<T>(c));
  return out;
}

template <class T>
std::pair<std::optional<std::vector<std::uint8_t>>, std::uint64_t> branch_and_bound(
    const Model& model, const std::vector<mpz_class>& cost) {
  BranchAndBound<T> bb(model, convert_cost<T>(cost));
  bb.run();
  return {bb.best(), bb.nodes()};
}

std::int64_t objective_of(const Model& model, const std::vector<std::uint8_t>& v) {
  std::int64_t z = 0;
  for (std::size_t j = 0; j < model.n; ++j) {
    if (v[j]) z += model.cost[j];
  }
  return z;
}

bool feasible(const Model& model, const std::vector<std::uint8_t>& v) {
  for (std::size_t j = 0; j < model.n; ++j) {
    if (v[j] < model.lo[j] || v[j] > model.hi[j]) return false;
  }
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    std::int64_t s = 0;
    const auto& row = model.rows[r];
    for (std::size_t j = 0; j < model.n; ++j) {
      if (v[j]) s += row[j];
    }
    if (model.equality[r] ? s != model.rhs[r] : s < model.rhs[r]) return false;
  }
  return true;
}

}  // namespace

bool satisfies(const IlpInstance& instance, const std::vector<std::uint8_t>& assignment) {
  const auto model = make_model(instance);
  if (assignment.size() != model.n) throw Error("assignment dimension mismatch");
  return !model.conflicting && feasible(model, assignment);
}

Solution solve(const IlpInstance& instance) {
  const auto model = make_model(instance);
  Solution sol;
  if (model.conflicting) return sol;

  const auto cost = perturbed_cost(model);
  std::pair<std::optional<std::vector<std::uint8_t>>, std::uint64_t> found;
  try {
    found = branch_and_bound<Rat64>(model, cost);
  } catch (const Overflow&) {
    found = branch_and_bound<mpq_class>(model, cost);
  }
  sol.nodes = found.second;
  if (!found.first) return sol;
  if (!feasible(model, *found.first)) throw Error("solver produced an assignment violating the instance");
  sol.status = SolveStatus::optimal;
  sol.assignment = std::move(*found.first);
  sol.objective = objective_of(model, sol.assignment);
  return sol;
}

Relaxation lp_relax(const IlpInstance& instance) {
  const auto model = make_model(instance);
  Relaxation out;
  if (model.conflicting) return out;

  auto finish = [&](const auto& lp) {
    if (!lp.feasible) return;
    out.status = SolveStatus::optimal;
    out.values.clear();
    for (const auto& v : lp.values) out.values.push_back(as_mpq(v));
    out.bound = as_mpq(lp.objective);
  };
  try {
    std::vector<Rat64> cost(model.cost.begin(), model.cost.end());
    finish(solve_lp<Rat64>(model, cost, model.lo, model.hi));
  } catch (const Overflow&) {
    std::vector<mpq_class> cost;
    for (const auto c : model.cost) cost.push_back(from_int<mpq_class>(c));
    finish(solve_lp<mpq_class>(model, cost, model.lo, model.hi));
  }
  return out;
}

Solution brute_force(const IlpInstance& instance) {
  const auto model = make_model(instance);
  if (model.n > 25) throw Error("brute force limited to 25 variables");
  Solution sol;
  if (model.conflicting) return sol;

  std::vector<std::size_t> free_vars;
  std::vector<std::uint8_t> v(model.n);
  for (std::size_t j = 0; j < model.n; ++j) {
    if (model.lo[j] == model.hi[j]) v[j] = model.lo[j];
    else free_vars.push_back(j);
  }
  const std::uint64_t combos = std::uint64_t{1} << free_vars.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    ++sol.nodes;
    for (std::size_t k = 0; k < free_vars.size(); ++k) v[free_vars[k]] = (mask >> k) & 1U;
    if (!feasible(model, v)) continue;
    const auto z = objective_of(model, v);
    if (!sol.optimal() || z < sol.objective || (z == sol.objective && v < sol.assignment)) {
      sol.status = SolveStatus::optimal;
      sol.objective = z;
      sol.assignment = v;
    }
  }
  return sol;
}

}  // namespace ilpminer
