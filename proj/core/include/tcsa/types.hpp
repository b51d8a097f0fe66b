#ifndef TCSA_TYPES_HPP
#define TCSA_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tcsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised on contract violations: bad shapes, degenerate inputs, unsupported
/// option combinations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ColumnKind { continuous, categorical };

enum class Mode { global, target, conditional, hybrid };
enum class Order { first, total };

std::string_view to_string(ColumnKind kind);
std::string_view to_string(Mode mode);
std::string_view to_string(Order order);
Mode parse_mode(std::string_view text);
Order parse_order(std::string_view text);
ColumnKind parse_column_kind(std::string_view text);

/// Nonempty set of distinct 0-based factor indices, kept sorted.
class FactorGroup {
 public:
  FactorGroup(std::vector<std::size_t> indices, std::size_t dimension);

  static FactorGroup single(std::size_t index, std::size_t dimension) {
    return FactorGroup({index}, dimension);
  }

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::size_t index) const;
  bool is_full() const { return indices_.size() == dimension_; }

  /// Throws when the group already covers every factor.
  FactorGroup complement() const;

  /// 1-based label such as "X1" or "X1,X3".
  std::string label() const;

  friend bool operator==(const FactorGroup&, const FactorGroup&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t dimension_;
};

/// A block of observed columns with per-column kind, the unit every
/// dependence measure operates on.
struct Variable {
  Matrix values;
  std::vector<ColumnKind> kinds;

  Variable() = default;
  Variable(Matrix v, std::vector<ColumnKind> k);
  /// All columns continuous.
  explicit Variable(Matrix v);
  static Variable column(const Vector& v, ColumnKind kind = ColumnKind::continuous);

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  bool all_continuous() const;
  bool all_categorical() const;
};

}  // namespace tcsa

#endif  // TCSA_TYPES_HPP
