#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace studentmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dimensions of the matrix being completed.
struct Shape {
  int rows = 0;
  int cols = 0;

  long entry_count() const { return static_cast<long>(rows) * cols; }
  bool operator==(const Shape&) const = default;
};

/// One observed position, 0-based. File formats use 1-based indices;
/// conversion happens at the I/O boundary only.
struct MaskEntry {
  int row = 0;
  int col = 0;
  bool operator==(const MaskEntry&) const = default;
};

/// The set of observed positions of a rows x cols matrix.
///
/// Entries are unique and in range. Their order is preserved and aligns
/// positionally with Dataset::values.
class Mask {
 public:
  Mask() = default;
  Mask(Shape shape, std::vector<MaskEntry> entries);

  const Shape& shape() const { return shape_; }
  const std::vector<MaskEntry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool full() const { return size() == shape_.entry_count(); }

 private:
  Shape shape_;
  std::vector<MaskEntry> entries_;
};

/// Observed entries of a partially revealed matrix, with optional ground
/// truth and an optional sampling distribution over positions.
struct Dataset {
  Mask mask;
  Vector values;                   // one value per mask entry, same order
  std::optional<Matrix> truth;     // full matrix, when known
  std::optional<Matrix> weights;   // per-entry probabilities, sum to 1

  Dataset() = default;
  Dataset(Mask mask, Vector values, std::optional<Matrix> truth = std::nullopt,
          std::optional<Matrix> weights = std::nullopt);

  int observed() const { return mask.size(); }
  const Shape& shape() const { return mask.shape(); }

  /// The observations zero-filled into a dense matrix.
  Matrix zero_filled() const;
};

}  // namespace studentmc
