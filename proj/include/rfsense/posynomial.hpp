#pragma once

// Signed-coefficient monomial algebra over the positive design variables
// (transmit powers p_j and sensor amplifications alpha_k).

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rfsense {

enum class VarKind : std::uint8_t { TxPower, Amplification, Auxiliary };

struct VarId {
  VarKind kind = VarKind::TxPower;
  int index = 0;  ///< zero-based

  auto operator<=>(const VarId&) const = default;
};

inline VarId tx_power(int j) { return {VarKind::TxPower, j}; }
inline VarId amplification(int k) { return {VarKind::Amplification, k}; }
inline VarId auxiliary(int i) { return {VarKind::Auxiliary, i}; }

/// "p1", "a3", "s1" (one-based for display).
std::string to_string(VarId v);

using Assignment = std::map<VarId, double>;

/// Sorted by variable, zero exponents removed.
using Exponents = std::vector<std::pair<VarId, double>>;

/// Terms whose merged coefficient falls below this magnitude are dropped.
inline constexpr double kCoefficientFloor = 1e-15;

class Monomial {
 public:
  Monomial() = default;  // the constant 1
  explicit Monomial(double coefficient, Exponents exponents = {});

  static Monomial variable(VarId v, double power = 1.0, double coefficient = 1.0);

  double coefficient() const { return coefficient_; }
  const Exponents& exponents() const { return exponents_; }
  double exponent(VarId v) const;
  double degree(VarKind kind) const;

  Monomial operator*(const Monomial& other) const;
  Monomial operator*(double scale) const;
  Monomial pow(double power) const;
  Monomial inverse() const { return pow(-1.0); }

 private:
  double coefficient_ = 1.0;
  Exponents exponents_;
};

class Signomial {
 public:
  Signomial() = default;
  explicit Signomial(std::vector<Monomial> terms);
  Signomial(std::initializer_list<Monomial> terms) : Signomial(std::vector<Monomial>(terms)) {}

  const std::vector<Monomial>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Signomial operator+(const Signomial& other) const;
  Signomial operator-(const Signomial& other) const;
  Signomial operator*(const Signomial& other) const;
  Signomial operator*(double scale) const;

 private:
  std::vector<Monomial> terms_;
};

/// Sum of monomials with strictly positive coefficients.
class Posynomial {
 public:
  Posynomial() = default;
  explicit Posynomial(std::vector<Monomial> terms);
  Posynomial(std::initializer_list<Monomial> terms) : Posynomial(std::vector<Monomial>(terms)) {}
  Posynomial(const Monomial& m) : Posynomial(std::vector<Monomial>{m}) {}

  const std::vector<Monomial>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Posynomial operator+(const Posynomial& other) const;
  Posynomial operator*(const Posynomial& other) const;
  Posynomial operator*(const Monomial& m) const;
  Posynomial operator*(double scale) const;

  Signomial as_signomial() const { return Signomial(terms_); }

 private:
  std::vector<Monomial> terms_;
};

double evaluate(const Monomial& m, const Assignment& x);
double evaluate(const Posynomial& p, const Assignment& x);
double evaluate(const Signomial& s, const Assignment& x);

std::set<VarId> variables(const Posynomial& p);
std::set<VarId> variables(const Signomial& s);

/// Folds the variables assigned in `fixed` into the coefficients.
Posynomial substitute(const Posynomial& p, const Assignment& fixed);

struct SignomialSplit {
  Posynomial plus;   ///< positive-coefficient terms
  Posynomial minus;  ///< negated negative-coefficient terms
};

/// s = plus - minus.
SignomialSplit split_signomial(const Signomial& s);

struct Condensation {
  Monomial bound;
  std::vector<double> weights;  ///< one per posynomial term, summing to 1
};

/// Arithmetic-geometric mean condensation of `p` at `point`: with weights
/// c_k = u_k(point) / p(point), the monomial prod_k (u_k(x) / c_k)^{c_k}
/// lower-bounds p(x) for every positive x and touches it at `point`.
Condensation condense(const Posynomial& p, const Assignment& point);

std::ostream& operator<<(std::ostream& os, const Monomial& m);
std::ostream& operator<<(std::ostream& os, const Posynomial& p);
std::ostream& operator<<(std::ostream& os, const Signomial& s);
std::string to_string(const Posynomial& p);
std::string to_string(const Signomial& s);

// ---------------------------------------------------------------------------
// Log-space form. With y = log x a posynomial becomes log(sum exp(A y + b));
// the solver and the property suites evaluate it through the SIMD kernels.

class VariableIndex {
 public:
  VariableIndex() = default;
  explicit VariableIndex(std::vector<VarId> vars);

  int size() const { return static_cast<int>(vars_.size()); }
  const std::vector<VarId>& vars() const { return vars_; }
  int position(VarId v) const;  ///< -1 when absent

 private:
  std::vector<VarId> vars_;
  std::map<VarId, int> positions_;
};

struct LogSumExpForm {
  int terms = 0;
  int vars = 0;
  std::vector<double> exponents;         ///< row-major terms x vars
  std::vector<double> log_coefficients;  ///< one per term

  /// log p(exp(y)); `scratch` needs `terms` entries.
  double value(std::span<const double> y, std::span<double> scratch) const;
  /// Also fills the softmax weights of the terms into `weights` and the
  /// gradient d/dy into `gradient`.
  double value_and_gradient(std::span<const double> y, std::span<double> weights,
                            std::span<double> gradient) const;
};

LogSumExpForm compile(const Posynomial& p, const VariableIndex& index);

}  // namespace rfsense
