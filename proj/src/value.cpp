#include "dfmpc/value.hpp"

#include <atomic>
#include <cmath>

namespace dfmpc {

namespace {

std::uint64_t next_version() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

}  // namespace

double Value::scalar() const {
  if (is_scalar()) return std::get<double>(v_);
  if (is_vector()) {
    const auto& v = std::get<Eigen::VectorXd>(v_);
    if (v.size() == 1) return v[0];
    throw DimensionError("expected scalar, found vector of length " +
                         std::to_string(v.size()));
  }
  const auto& m = std::get<Eigen::MatrixXd>(v_);
  if (m.size() == 1) return m(0, 0);
  throw DimensionError("expected scalar, found matrix");
}

Eigen::VectorXd Value::vector() const {
  if (is_vector()) return std::get<Eigen::VectorXd>(v_);
  if (is_scalar()) return Eigen::VectorXd::Constant(1, std::get<double>(v_));
  const auto& m = std::get<Eigen::MatrixXd>(v_);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw DimensionError("expected vector, found matrix");
}

const Eigen::MatrixXd& Value::matrix() const {
  if (!is_matrix()) throw DimensionError("expected matrix");
  return std::get<Eigen::MatrixXd>(v_);
}

const Eigen::VectorXd& Value::vector_ref() const {
  if (!is_vector()) throw DimensionError("expected vector");
  return std::get<Eigen::VectorXd>(v_);
}

long long Value::integer() const {
  double s = scalar();
  double r = std::round(s);
  if (!std::isfinite(s) || std::abs(s - r) > 1e-9) {
    throw DimensionError("expected integer, found " + std::to_string(s));
  }
  return static_cast<long long>(r);
}

ParamMap::ParamMap() : version_(next_version()) {}

ParamMap::ParamMap(const ParamMap& o) : items_(o.items_), version_(next_version()) {}

ParamMap::ParamMap(ParamMap&& o) noexcept
    : items_(std::move(o.items_)), version_(o.version_) {}

ParamMap& ParamMap::operator=(const ParamMap& o) {
  if (this != &o) {
    items_ = o.items_;
    version_ = next_version();
  }
  return *this;
}

ParamMap& ParamMap::operator=(ParamMap&& o) noexcept {
  items_ = std::move(o.items_);
  version_ = o.version_;
  return *this;
}

const Value* ParamMap::find(std::string_view name) const {
  for (const auto& [k, v] : items_) {
    if (k == name) return &v;
  }
  return nullptr;
}

const Value& ParamMap::at(std::string_view name) const {
  const Value* v = find(name);
  if (!v) throw MissingFieldError(std::string(name));
  return *v;
}

void ParamMap::set(std::string_view name, Value v) {
  version_ = next_version();
  for (auto& [k, existing] : items_) {
    if (k == name) {
      existing = std::move(v);
      return;
    }
  }
  items_.emplace_back(std::string(name), std::move(v));
}

double ParamMap::scalar_or(std::string_view name, double fallback) const {
  const Value* v = find(name);
  return v ? v->scalar() : fallback;
}

}  // namespace dfmpc
