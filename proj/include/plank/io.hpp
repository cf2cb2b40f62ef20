#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plank/geometry.hpp"

namespace plank {

// Unreadable or malformed input.  Carries a 1-based line/column when the
// failure has a textual location (0 otherwise).
class ParseFailure : public std::runtime_error {
 public:
  ParseFailure(const std::string& message, int line = 0, int column = 0);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Vector files: JSON {"schema":"1","kind":"vectors","n":..,"d":..,"vectors":[[..],..]}
// or CSV with one row per vector.  The format is sniffed from the content, so
// any extension works.
UnitVectorSet read_vectors(const std::filesystem::path& file);
std::string vectors_to_json(const UnitVectorSet& vs);

// Gram files: {"schema":"1","kind":"gram","n":..,"entries":[[..],..]}.
std::string gram_to_json(const GramMatrix& H);

// A solver input that is either a vector family or a bare Gram matrix.
struct Instance {
  std::optional<UnitVectorSet> vectors;  // present for vector inputs
  GramMatrix gram;
};
// Vector inputs get their Gram matrix computed; gram inputs load it directly.
Instance read_instance(const std::filesystem::path& file);

// Zone files: {"schema":"1","kind":"zones","zones":[{"normal":[x,y,z],"width":w},..]}.
std::vector<Zone> read_zones(const std::filesystem::path& file);
std::string zones_to_json(const std::vector<Zone>& zones);

}  // namespace plank
