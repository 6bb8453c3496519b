#pragma once

#include <filesystem>

#include "studentmc/data.hpp"

namespace studentmc {

/// Dense matrix as headerless comma-separated rows, 17 significant digits
/// (lossless round trip for doubles).
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Sparse observations with header "i,j,value" and 1-based indices.
void write_observations_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_observations_csv(const std::filesystem::path& path, Shape shape);

/// Index set with header "i,j" and 1-based indices.
void write_mask_csv(const std::filesystem::path& path, const Mask& mask);
Mask read_mask_csv(const std::filesystem::path& path, Shape shape);

/// Grayscale PGM, plain (P2) or binary (P5), maxval 255 only. Values are
/// clamped to [0, 255] and rounded on write.
Matrix read_image_pgm(const std::filesystem::path& path);
void write_image_pgm(const std::filesystem::path& path, const Matrix& image,
                     bool binary = true);

}  // namespace studentmc
