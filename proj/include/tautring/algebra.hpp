#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace tautring {

using Rational = mpq_class;

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::string rational_to_string(const Rational& q);
Rational parse_rational(std::string_view text);
Rational binomial(long n, long k);

struct Bidegree {
  int i = 0;
  int j = 0;

  int codim() const { return (i + j) / 2; }
  Bidegree operator+(Bidegree o) const { return {i + o.i, j + o.j}; }
  Bidegree operator-(Bidegree o) const { return {i - o.i, j - o.j}; }
  auto operator<=>(const Bidegree&) const = default;
  std::string to_string() const;
};

struct VariableId {
  enum class Kind : std::uint8_t { X, Y };
  Kind kind = Kind::X;
  int i = 0;
  int j = 0;

  static VariableId x(int i, int j) { return {Kind::X, i, j}; }
  static VariableId y() { return {Kind::Y, 0, 2}; }
  Bidegree bidegree() const { return {i, j}; }
  bool operator==(const VariableId&) const = default;
  std::string to_string() const;
};

using VarIndex = std::uint16_t;

// Sorted list of (variable index, exponent) pairs with its bidegree cached.
class Monomial {
 public:
  using Factor = std::pair<VarIndex, std::uint16_t>;
  using FactorList = boost::container::small_vector<Factor, 6>;

  Monomial() = default;
  Monomial(FactorList factors, Bidegree b);

  const FactorList& factors() const { return factors_; }
  Bidegree bidegree() const { return bidegree_; }
  int codim() const { return bidegree_.codim(); }
  bool is_unit() const { return factors_.empty(); }
  unsigned exponent(VarIndex v) const;
  unsigned degree() const;
  std::size_t hash() const { return hash_; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  bool operator==(const Monomial& o) const {
    return hash_ == o.hash_ && factors_ == o.factors_;
  }

 private:
  void rehash();
  FactorList factors_;
  Bidegree bidegree_{};
  std::size_t hash_ = 1469598103934665603ull;  // hash of the empty product
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Graded by codimension, then lexicographic on exponent vectors in the
// canonical variable order.
int compare_monomials(const Monomial& a, const Monomial& b);

struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare_monomials(a, b) < 0;
  }
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial term(const Monomial& m, const Rational& c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Monomial& m) const;

  void add_term(const Monomial& m, const Rational& c);
  void add_scaled(const Polynomial& p, const Rational& c);
  Polynomial scaled(const Rational& c) const;
  Polynomial times(const Monomial& m) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  std::optional<Bidegree> homogeneous_bidegree() const;
  std::map<Bidegree, Polynomial> components() const;

 private:
  Terms terms_;
};

class AlgebraContext {
 public:
  static std::shared_ptr<const AlgebraContext> make(int genus);

  int genus() const { return g_; }
  const std::vector<VariableId>& variables() const { return vars_; }
  std::size_t variable_count() const { return vars_.size(); }
  const VariableId& variable(VarIndex v) const { return vars_[v]; }
  Bidegree bidegree(VarIndex v) const { return vars_[v].bidegree(); }

  std::optional<VarIndex> index_of(const VariableId& v) const;
  // Index of x_{i,j}; nullopt when (i,j) does not name a generator.
  std::optional<VarIndex> x_index(int i, int j) const;
  VarIndex y_index() const { return static_cast<VarIndex>(vars_.size() - 1); }
  VarIndex x20_index() const { return x20_; }
  bool is_column0(VarIndex v) const { return vars_[v].i == 0; }
  // Neither column zero nor x[2,0].
  bool is_core(VarIndex v) const { return vars_[v].i != 0 && v != x20_; }

  Monomial unit() const { return {}; }
  Monomial var(VarIndex v) const { return Monomial({{v, 1}}, bidegree(v)); }
  Monomial var_power(VarIndex v, unsigned e) const;
  Monomial monomial(const std::vector<std::pair<VariableId, unsigned>>& f) const;
  Monomial divide(const Monomial& m, VarIndex v) const;
  Monomial divide(const Monomial& m, const Monomial& d) const;

  // x_{a,b} under the conventions x_{0,0} = g and out-of-range symbols = 0.
  Polynomial x(int a, int b) const;
  Polynomial y() const { return Polynomial::term(var(y_index())); }

  // All monomials of bidegree b in canonical order, avoiding variables for
  // which `exclude` returns true.
  std::vector<Monomial> enumerate(
      Bidegree b, const std::function<bool(VarIndex)>& exclude = nullptr) const;
  std::size_t count(Bidegree b,
                    const std::function<bool(VarIndex)>& exclude = nullptr) const;

  std::string to_string(const Monomial& m) const;
  std::string to_string(const Polynomial& p) const;
  Monomial parse_monomial(std::string_view text) const;
  Polynomial parse_polynomial(std::string_view text) const;

 private:
  explicit AlgebraContext(int genus);

  int g_;
  std::vector<VariableId> vars_;
  int x_rows_ = 0, x_cols_ = 0;
  std::vector<std::int32_t> x_lookup_;  // indexed by j * x_cols_ + i
  VarIndex x20_ = 0;
};

using ContextPtr = std::shared_ptr<const AlgebraContext>;

}  // namespace tautring
