#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dfmpc/errors.hpp"

namespace dfmpc {

/// One entry of a parameter record: a scalar, a column vector, or a matrix.
/// All numeric content is double precision.
class Value {
 public:
  Value() : v_(0.0) {}
  Value(double s) : v_(s) {}
  Value(int s) : v_(static_cast<double>(s)) {}
  Value(Eigen::VectorXd v) : v_(std::move(v)) {}
  Value(Eigen::MatrixXd m) : v_(std::move(m)) {}

  bool is_scalar() const { return std::holds_alternative<double>(v_); }
  bool is_vector() const { return std::holds_alternative<Eigen::VectorXd>(v_); }
  bool is_matrix() const { return std::holds_alternative<Eigen::MatrixXd>(v_); }

  /// Scalar content. A 1-element vector or 1x1 matrix promotes to scalar.
  double scalar() const;

  /// Vector content, by value. A scalar promotes to a 1-vector.
  Eigen::VectorXd vector() const;

  /// Matrix content, by reference. No promotion.
  const Eigen::MatrixXd& matrix() const;

  /// Vector content by reference. No promotion.
  const Eigen::VectorXd& vector_ref() const;

  /// Scalar that must be (close to) an integer.
  long long integer() const;

  bool operator==(const Value& o) const { return v_ == o.v_; }

 private:
  std::variant<double, Eigen::VectorXd, Eigen::MatrixXd> v_;
};

/// Open key-value store backing the free-form part of parameter records.
/// Preserves insertion order (serialization is reproducible) and carries a
/// version stamp: any mutation or copy produces a globally fresh version, so
/// hot callbacks can cache derived constants keyed on version().
class ParamMap {
 public:
  ParamMap();
  ParamMap(const ParamMap& o);
  ParamMap(ParamMap&& o) noexcept;
  ParamMap& operator=(const ParamMap& o);
  ParamMap& operator=(ParamMap&& o) noexcept;

  bool has(std::string_view name) const { return find(name) != nullptr; }
  const Value* find(std::string_view name) const;

  /// Named value; throws MissingFieldError if absent.
  const Value& at(std::string_view name) const;

  void set(std::string_view name, Value v);

  double scalar(std::string_view name) const { return at(name).scalar(); }
  double scalar_or(std::string_view name, double fallback) const;
  long long integer(std::string_view name) const { return at(name).integer(); }
  Eigen::VectorXd vector(std::string_view name) const { return at(name).vector(); }
  const Eigen::MatrixXd& matrix(std::string_view name) const { return at(name).matrix(); }

  /// Monotone stamp; changes on every mutation and on every copy.
  std::uint64_t version() const { return version_; }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<std::pair<std::string, Value>> items_;
  std::uint64_t version_;
};

}  // namespace dfmpc
