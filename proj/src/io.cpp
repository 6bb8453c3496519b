#include "studentmc/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace studentmc {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& message) {
  throw std::runtime_error(path.string() + ": " + message);
}

[[noreturn]] void fail_line(const std::filesystem::path& path, long line,
                            const std::string& message) {
  fail(path, "line " + std::to_string(line) + ": " + message);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) {
    fail(path, "cannot open for writing");
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) {
    fail(path, "cannot open for reading");
  }
  return in;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::filesystem::path& path, long line, const std::string& s) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) {
      fail_line(path, line, "trailing characters in '" + s + "'");
    }
    return v;
  } catch (const std::logic_error&) {
    fail_line(path, line, "not a number: '" + s + "'");
  }
}

long parse_index(const std::filesystem::path& path, long line, const std::string& s) {
  long value = 0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    fail_line(path, line, "not an integer index: '" + s + "'");
  }
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') {
    s.pop_back();
  }
  return s;
}

MaskEntry parse_entry(const std::filesystem::path& path, long line,
                      const std::string& si, const std::string& sj, Shape shape) {
  const long i = parse_index(path, line, si);
  const long j = parse_index(path, line, sj);
  if (i < 1 || i > shape.rows || j < 1 || j > shape.cols) {
    fail_line(path, line,
              "index (" + std::to_string(i) + "," + std::to_string(j) +
                  ") outside a " + std::to_string(shape.rows) + "x" +
                  std::to_string(shape.cols) + " matrix");
  }
  return {static_cast<int>(i - 1), static_cast<int>(j - 1)};
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_value(m(i, j));
    }
    out << '\n';
  }
  if (!out) {
    fail(path, "write failed");
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      row.push_back(parse_double(path, line_no, f));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail_line(path, line_no, "inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    fail(path, "empty matrix file");
  }
  Matrix m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_observations_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  out << "i,j,value\n";
  const auto& entries = data.mask.entries();
  for (int k = 0; k < data.observed(); ++k) {
    out << entries[k].row + 1 << ',' << entries[k].col + 1 << ','
        << format_value(data.values[k]) << '\n';
  }
  if (!out) {
    fail(path, "write failed");
  }
}

Dataset read_observations_csv(const std::filesystem::path& path, Shape shape) {
  std::ifstream in = open_in(path);
  std::string line;
  long line_no = 0;
  std::vector<MaskEntry> entries;
  std::vector<double> values;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "i,j,value") {
        fail_line(path, line_no, "expected header 'i,j,value'");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3) {
      fail_line(path, line_no, "expected 3 fields");
    }
    entries.push_back(parse_entry(path, line_no, fields[0], fields[1], shape));
    values.push_back(parse_double(path, line_no, fields[2]));
  }
  if (!saw_header || entries.empty()) {
    fail(path, "no observations found");
  }
  Vector v = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return Dataset(Mask(shape, std::move(entries)), std::move(v));
}

void write_mask_csv(const std::filesystem::path& path, const Mask& mask) {
  std::ofstream out = open_out(path);
  out << "i,j\n";
  for (const auto& e : mask.entries()) {
    out << e.row + 1 << ',' << e.col + 1 << '\n';
  }
  if (!out) {
    fail(path, "write failed");
  }
}

Mask read_mask_csv(const std::filesystem::path& path, Shape shape) {
  std::ifstream in = open_in(path);
  std::string line;
  long line_no = 0;
  std::vector<MaskEntry> entries;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "i,j") {
        fail_line(path, line_no, "expected header 'i,j'");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 2) {
      fail_line(path, line_no, "expected 2 fields");
    }
    entries.push_back(parse_entry(path, line_no, fields[0], fields[1], shape));
  }
  if (!saw_header || entries.empty()) {
    fail(path, "no mask entries found");
  }
  return Mask(shape, std::move(entries));
}

namespace {

// Next token of a PGM header, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in, const std::filesystem::path& path) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (token.empty()) {
    fail(path, "truncated PGM header");
  }
  return token;
}

int pgm_int(std::istream& in, const std::filesystem::path& path, const char* what) {
  const std::string token = pgm_token(in, path);
  try {
    return std::stoi(token);
  } catch (const std::logic_error&) {
    fail(path, std::string("bad PGM ") + what + ": '" + token + "'");
  }
}

}  // namespace

Matrix read_image_pgm(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, /*binary=*/true);
  const std::string magic = pgm_token(in, path);
  if (magic != "P2" && magic != "P5") {
    fail(path, "unsupported magic number '" + magic + "' (want P2 or P5)");
  }
  const int width = pgm_int(in, path, "width");
  const int height = pgm_int(in, path, "height");
  const int maxval = pgm_int(in, path, "maxval");
  if (width < 1 || height < 1) {
    fail(path, "bad PGM dimensions");
  }
  if (maxval != 255) {
    fail(path, "unsupported maxval " + std::to_string(maxval) + " (want 255)");
  }

  Matrix image(height, width);
  if (magic == "P5") {
    // Raster starts after a single whitespace character.
    std::vector<unsigned char> raster(static_cast<size_t>(width) * height);
    in.read(reinterpret_cast<char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
    if (static_cast<size_t>(in.gcount()) != raster.size()) {
      fail(path, "truncated P5 raster");
    }
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        image(i, j) = raster[static_cast<size_t>(i) * width + j];
      }
    }
  } else {
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        const int v = pgm_int(in, path, "pixel");
        if (v < 0 || v > maxval) {
          fail(path, "pixel value " + std::to_string(v) + " out of range");
        }
        image(i, j) = v;
      }
    }
  }
  return image;
}

void write_image_pgm(const std::filesystem::path& path, const Matrix& image,
                     bool binary) {
  if (image.rows() < 1 || image.cols() < 1) {
    throw std::invalid_argument("write_image_pgm: empty image");
  }
  const int height = static_cast<int>(image.rows());
  const int width = static_cast<int>(image.cols());
  const auto quantize = [](double v) -> int {
    const double clamped = std::min(255.0, std::max(0.0, v));
    return static_cast<int>(std::lround(clamped));
  };

  std::ofstream out = open_out(path, /*binary=*/binary);
  out << (binary ? "P5" : "P2") << '\n' << width << ' ' << height << '\n' << "255\n";
  if (binary) {
    std::vector<unsigned char> raster(static_cast<size_t>(width) * height);
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        raster[static_cast<size_t>(i) * width + j] =
            static_cast<unsigned char>(quantize(image(i, j)));
      }
    }
    out.write(reinterpret_cast<const char*>(raster.data()),
              static_cast<std::streamsize>(raster.size()));
  } else {
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        out << quantize(image(i, j)) << (j + 1 < width ? ' ' : '\n');
      }
    }
  }
  if (!out) {
    fail(path, "write failed");
  }
}

}  // namespace studentmc
