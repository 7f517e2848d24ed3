#include "rfsense/posynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rfsense/error.hpp"
#include "rfsense/kernels.hpp"

namespace rfsense {
namespace {

Exponents normalize_exponents(Exponents e) {
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Exponents out;
  for (const auto& [v, power] : e) {
    if (!std::isfinite(power)) throw std::invalid_argument("monomial exponents must be finite");
    if (!out.empty() && out.back().first == v) {
      out.back().second += power;
    } else {
      out.emplace_back(v, power);
    }
  }
  std::erase_if(out, [](const auto& entry) { return entry.second == 0.0; });
  return out;
}

Exponents add_exponents(const Exponents& a, const Exponents& b, double scale_b = 1.0) {
  Exponents out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      out.emplace_back(ib->first, scale_b * ib->second);
      ++ib;
    } else {
      const double sum = ia->second + scale_b * ib->second;
      if (sum != 0.0) out.emplace_back(ia->first, sum);
      ++ia;
      ++ib;
    }
  }
  return out;
}

// Merge like terms (identical exponent maps), drop negligible coefficients,
// and order terms canonically.
std::vector<Monomial> merge_terms(std::vector<Monomial> terms) {
  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
    return a.exponents() < b.exponents();
  });
  std::vector<Monomial> out;
  for (const Monomial& m : terms) {
    if (!out.empty() && out.back().exponents() == m.exponents()) {
      const double c = out.back().coefficient() + m.coefficient();
      out.back() = Monomial(c, m.exponents());
    } else {
      out.push_back(m);
    }
  }
  std::erase_if(out, [](const Monomial& m) { return std::abs(m.coefficient()) < kCoefficientFloor; });
  return out;
}

double lookup(const Assignment& x, VarId v) {
  const auto it = x.find(v);
  if (it == x.end()) throw UnboundVariable("no value for variable " + to_string(v));
  if (!(it->second > 0.0)) {
    throw std::invalid_argument("variable " + to_string(v) + " must be strictly positive");
  }
  return it->second;
}

std::string format_coefficient(double c) {
  std::ostringstream os;
  os.precision(6);
  os << c;
  return os.str();
}

void print_powers(std::ostream& os, const Exponents& e, bool first) {
  for (const auto& [v, power] : e) {
    if (!first) os << '*';
    first = false;
    os << to_string(v);
    if (power != 1.0) os << '^' << format_coefficient(power);
  }
}

}  // namespace

std::string to_string(VarId v) {
  const char prefix = v.kind == VarKind::TxPower ? 'p' : v.kind == VarKind::Amplification ? 'a' : 's';
  return prefix + std::to_string(v.index + 1);
}

// --- Monomial ---------------------------------------------------------------

Monomial::Monomial(double coefficient, Exponents exponents)
    : coefficient_(coefficient), exponents_(normalize_exponents(std::move(exponents))) {
  if (!std::isfinite(coefficient_)) throw std::invalid_argument("monomial coefficient must be finite");
}

Monomial Monomial::variable(VarId v, double power, double coefficient) {
  return Monomial(coefficient, {{v, power}});
}

double Monomial::exponent(VarId v) const {
  const auto it = std::lower_bound(exponents_.begin(), exponents_.end(), v,
                                   [](const auto& e, VarId key) { return e.first < key; });
  return (it != exponents_.end() && it->first == v) ? it->second : 0.0;
}

double Monomial::degree(VarKind kind) const {
  double d = 0.0;
  for (const auto& [v, power] : exponents_) {
    if (v.kind == kind) d += power;
  }
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.coefficient_ = coefficient_ * other.coefficient_;
  out.exponents_ = add_exponents(exponents_, other.exponents_);
  return out;
}

Monomial Monomial::operator*(double scale) const {
  Monomial out = *this;
  out.coefficient_ *= scale;
  return out;
}

Monomial Monomial::pow(double power) const {
  Monomial out;
  out.coefficient_ = std::pow(coefficient_, power);
  for (const auto& [v, e] : exponents_) {
    if (e * power != 0.0) out.exponents_.emplace_back(v, e * power);
  }
  return out;
}

// --- Signomial / Posynomial -------------------------------------------------

Signomial::Signomial(std::vector<Monomial> terms) : terms_(merge_terms(std::move(terms))) {}

Signomial Signomial::operator+(const Signomial& other) const {
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return Signomial(std::move(all));
}

Signomial Signomial::operator-(const Signomial& other) const { return *this + other * -1.0; }

Signomial Signomial::operator*(const Signomial& other) const {
  std::vector<Monomial> all;
  all.reserve(terms_.size() * other.terms_.size());
  for (const Monomial& a : terms_) {
    for (const Monomial& b : other.terms_) all.push_back(a * b);
  }
  return Signomial(std::move(all));
}

Signomial Signomial::operator*(double scale) const {
  std::vector<Monomial> all;
  for (const Monomial& m : terms_) all.push_back(m * scale);
  return Signomial(std::move(all));
}

Posynomial::Posynomial(std::vector<Monomial> terms) {
  for (const Monomial& m : terms) {
    if (!(m.coefficient() > 0.0)) {
      throw std::invalid_argument("posynomial terms need positive coefficients");
    }
  }
  terms_ = merge_terms(std::move(terms));
}

Posynomial Posynomial::operator+(const Posynomial& other) const {
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return Posynomial(std::move(all));
}

Posynomial Posynomial::operator*(const Posynomial& other) const {
  std::vector<Monomial> all;
  all.reserve(terms_.size() * other.terms_.size());
  for (const Monomial& a : terms_) {
    for (const Monomial& b : other.terms_) all.push_back(a * b);
  }
  return Posynomial(std::move(all));
}

Posynomial Posynomial::operator*(const Monomial& m) const {
  std::vector<Monomial> all;
  for (const Monomial& t : terms_) all.push_back(t * m);
  return Posynomial(std::move(all));
}

Posynomial Posynomial::operator*(double scale) const {
  if (!(scale > 0.0)) throw std::invalid_argument("posynomial scale must be positive");
  std::vector<Monomial> all;
  for (const Monomial& t : terms_) all.push_back(t * scale);
  return Posynomial(std::move(all));
}

// --- evaluation -------------------------------------------------------------

double evaluate(const Monomial& m, const Assignment& x) {
  double value = m.coefficient();
  for (const auto& [v, power] : m.exponents()) value *= std::pow(lookup(x, v), power);
  return value;
}

double evaluate(const Posynomial& p, const Assignment& x) {
  double sum = 0.0;
  for (const Monomial& m : p.terms()) sum += evaluate(m, x);
  return sum;
}

double evaluate(const Signomial& s, const Assignment& x) {
  double sum = 0.0;
  for (const Monomial& m : s.terms()) sum += evaluate(m, x);
  return sum;
}

std::set<VarId> variables(const Posynomial& p) {
  std::set<VarId> out;
  for (const Monomial& m : p.terms()) {
    for (const auto& e : m.exponents()) out.insert(e.first);
  }
  return out;
}

std::set<VarId> variables(const Signomial& s) {
  std::set<VarId> out;
  for (const Monomial& m : s.terms()) {
    for (const auto& e : m.exponents()) out.insert(e.first);
  }
  return out;
}

Posynomial substitute(const Posynomial& p, const Assignment& fixed) {
  std::vector<Monomial> out;
  for (const Monomial& m : p.terms()) {
    double c = m.coefficient();
    Exponents rest;
    for (const auto& [v, power] : m.exponents()) {
      const auto it = fixed.find(v);
      if (it == fixed.end()) {
        rest.emplace_back(v, power);
      } else {
        c *= std::pow(lookup(fixed, v), power);
      }
    }
    out.emplace_back(c, std::move(rest));
  }
  return Posynomial(std::move(out));
}

SignomialSplit split_signomial(const Signomial& s) {
  std::vector<Monomial> plus;
  std::vector<Monomial> minus;
  for (const Monomial& m : s.terms()) {
    if (m.coefficient() > 0.0) {
      plus.push_back(m);
    } else {
      minus.push_back(m * -1.0);
    }
  }
  return {Posynomial(std::move(plus)), Posynomial(std::move(minus))};
}

Condensation condense(const Posynomial& p, const Assignment& point) {
  if (p.empty()) throw EmptyPosynomial("cannot condense an empty posynomial");

  std::vector<double> values;
  values.reserve(p.size());
  double total = 0.0;
  for (const Monomial& m : p.terms()) {
    values.push_back(evaluate(m, point));
    total += values.back();
  }

  Condensation out;
  out.weights.reserve(p.size());
  double log_coefficient = 0.0;
  Exponents powers;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double c = values[k] / total;
    out.weights.push_back(c);
    if (c == 0.0) continue;  // (u/c)^c -> 1 as c -> 0
    const Monomial& m = p.terms()[k];
    log_coefficient += c * (std::log(m.coefficient()) - std::log(c));
    for (const auto& [v, e] : m.exponents()) powers.emplace_back(v, c * e);
  }
  out.bound = Monomial(std::exp(log_coefficient), std::move(powers));
  return out;
}

// --- printing ---------------------------------------------------------------

std::ostream& operator<<(std::ostream& os, const Monomial& m) {
  const bool unit = m.coefficient() == 1.0 && !m.exponents().empty();
  if (!unit) os << format_coefficient(m.coefficient());
  print_powers(os, m.exponents(), unit);
  return os;
}

std::ostream& operator<<(std::ostream& os, const Posynomial& p) { return os << p.as_signomial(); }

std::ostream& operator<<(std::ostream& os, const Signomial& s) {
  if (s.empty()) return os << '0';
  bool first = true;
  for (const Monomial& m : s.terms()) {
    if (first) {
      os << m;
    } else if (m.coefficient() < 0.0) {
      os << " - " << m * -1.0;
    } else {
      os << " + " << m;
    }
    first = false;
  }
  return os;
}

std::string to_string(const Posynomial& p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

std::string to_string(const Signomial& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

// --- log-space form ---------------------------------------------------------

VariableIndex::VariableIndex(std::vector<VarId> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) positions_[vars_[i]] = static_cast<int>(i);
}

int VariableIndex::position(VarId v) const {
  const auto it = positions_.find(v);
  return it == positions_.end() ? -1 : it->second;
}

LogSumExpForm compile(const Posynomial& p, const VariableIndex& index) {
  LogSumExpForm out;
  out.terms = static_cast<int>(p.size());
  out.vars = index.size();
  out.exponents.assign(static_cast<std::size_t>(out.terms) * out.vars, 0.0);
  out.log_coefficients.reserve(p.size());
  for (int r = 0; r < out.terms; ++r) {
    const Monomial& m = p.terms()[r];
    out.log_coefficients.push_back(std::log(m.coefficient()));
    for (const auto& [v, power] : m.exponents()) {
      const int c = index.position(v);
      if (c < 0) throw UnboundVariable("variable " + to_string(v) + " is not indexed");
      out.exponents[static_cast<std::size_t>(r) * out.vars + c] = power;
    }
  }
  return out;
}

double LogSumExpForm::value(std::span<const double> y, std::span<double> scratch) const {
  const auto z = scratch.first(terms);
  kernels::affine(exponents, log_coefficients, y.first(vars), z);
  return kernels::log_sum_exp(z);
}

double LogSumExpForm::value_and_gradient(std::span<const double> y, std::span<double> weights,
                                         std::span<double> gradient) const {
  const auto z = weights.first(terms);
  kernels::affine(exponents, log_coefficients, y.first(vars), z);
  const double v = kernels::log_sum_exp(z, z);
  kernels::weighted_column_sum(exponents, z, gradient.first(vars));
  return v;
}

}  // namespace rfsense
