#include "tcsa/types.hpp"

#include <algorithm>

namespace tcsa {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::continuous ? "continuous" : "categorical";
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::global: return "global";
    case Mode::target: return "target";
    case Mode::conditional: return "conditional";
    case Mode::hybrid: return "hybrid";
  }
  return "global";
}

std::string_view to_string(Order order) {
  return order == Order::first ? "first" : "total";
}

Mode parse_mode(std::string_view text) {
  if (text == "global") return Mode::global;
  if (text == "target") return Mode::target;
  if (text == "conditional") return Mode::conditional;
  if (text == "hybrid") return Mode::hybrid;
  throw Error("unknown mode '" + std::string(text) + "'");
}

Order parse_order(std::string_view text) {
  if (text == "first") return Order::first;
  if (text == "total") return Order::total;
  throw Error("unknown order '" + std::string(text) + "'");
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "continuous") return ColumnKind::continuous;
  if (text == "categorical") return ColumnKind::categorical;
  throw Error("unknown column kind '" + std::string(text) + "'");
}

FactorGroup::FactorGroup(std::vector<std::size_t> indices, std::size_t dimension)
    : indices_(std::move(indices)), dimension_(dimension) {
  if (indices_.empty()) throw Error("factor group must be nonempty");
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw Error("factor group indices must be distinct");
  if (indices_.back() >= dimension_) throw Error("factor group index out of range");
}

bool FactorGroup::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

FactorGroup FactorGroup::complement() const {
  if (is_full()) throw Error("complement of the full factor set is empty");
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dimension_; ++i)
    if (!contains(i)) rest.push_back(i);
  return FactorGroup(std::move(rest), dimension_);
}

std::string FactorGroup::label() const {
  std::string out;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) out += ',';
    out += 'X';
    out += std::to_string(indices_[k] + 1);
  }
  return out;
}

Variable::Variable(Matrix v, std::vector<ColumnKind> k) : values(std::move(v)), kinds(std::move(k)) {
  if (static_cast<Eigen::Index>(kinds.size()) != values.cols())
    throw Error("variable kinds do not match column count");
}

Variable::Variable(Matrix v)
    : values(std::move(v)), kinds(static_cast<std::size_t>(values.cols()), ColumnKind::continuous) {}

Variable Variable::column(const Vector& v, ColumnKind kind) {
  return Variable(Matrix(v), {kind});
}

bool Variable::all_continuous() const {
  return std::all_of(kinds.begin(), kinds.end(), [](ColumnKind k) { return k == ColumnKind::continuous; });
}

bool Variable::all_categorical() const {
  return std::all_of(kinds.begin(), kinds.end(), [](ColumnKind k) { return k == ColumnKind::categorical; });
}

}  // namespace tcsa
