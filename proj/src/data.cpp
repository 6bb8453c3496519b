#include "studentmc/data.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace studentmc {

Mask::Mask(Shape shape, std::vector<MaskEntry> entries)
    : shape_(shape), entries_(std::move(entries)) {
  if (shape_.rows < 1 || shape_.cols < 1) {
    throw std::invalid_argument("Mask: shape must be at least 1x1");
  }
  if (entries_.empty()) {
    throw std::invalid_argument("Mask: at least one observed entry required");
  }
  std::unordered_set<long> seen;
  seen.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (e.row < 0 || e.row >= shape_.rows || e.col < 0 || e.col >= shape_.cols) {
      throw std::invalid_argument("Mask: entry (" + std::to_string(e.row) + "," +
                                  std::to_string(e.col) + ") out of range");
    }
    const long linear = static_cast<long>(e.row) * shape_.cols + e.col;
    if (!seen.insert(linear).second) {
      throw std::invalid_argument("Mask: duplicate entry (" + std::to_string(e.row) +
                                  "," + std::to_string(e.col) + ")");
    }
  }
}

Dataset::Dataset(Mask mask_in, Vector values_in, std::optional<Matrix> truth_in,
                 std::optional<Matrix> weights_in)
    : mask(std::move(mask_in)),
      values(std::move(values_in)),
      truth(std::move(truth_in)),
      weights(std::move(weights_in)) {
  if (values.size() != mask.size()) {
    throw std::invalid_argument("Dataset: need exactly one value per mask entry");
  }
  const Shape& s = mask.shape();
  if (truth && (truth->rows() != s.rows || truth->cols() != s.cols)) {
    throw std::invalid_argument("Dataset: truth shape mismatch");
  }
  if (weights) {
    if (weights->rows() != s.rows || weights->cols() != s.cols) {
      throw std::invalid_argument("Dataset: weights shape mismatch");
    }
    if ((weights->array() < 0.0).any()) {
      throw std::invalid_argument("Dataset: weights must be nonnegative");
    }
    if (std::abs(weights->sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("Dataset: weights must sum to 1");
    }
  }
}

Matrix Dataset::zero_filled() const {
  Matrix out = Matrix::Zero(shape().rows, shape().cols);
  const auto& entries = mask.entries();
  for (int k = 0; k < mask.size(); ++k) {
    out(entries[k].row, entries[k].col) = values[k];
  }
  return out;
}

}  // namespace studentmc
